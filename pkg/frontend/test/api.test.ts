import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

interface Call {
  url: string;
  init?: RequestInit;
}

function jsonResponse(body: unknown, status = 200): Response {
  return {
    ok: status >= 200 && status < 300,
    status,
    statusText: `status ${status}`,
    json: async () => JSON.parse(JSON.stringify(body)),
  } as unknown as Response;
}

function client(handler: (call: Call) => Response) {
  const calls: Call[] = [];
  const fetchImpl = (async (url: RequestInfo | URL, init?: RequestInit) => {
    const call = { url: String(url), init };
    calls.push(call);
    return handler(call);
  }) as typeof fetch;
  return { api: new ApiClient("http://svc", fetchImpl), calls };
}

describe("ApiClient", () => {
  it("creates a session", async () => {
    const { api, calls } = client(() => jsonResponse({ session_id: "abc" }, 201));
    expect(await api.createSession()).toBe("abc");
    expect(calls[0]!.url).toBe("http://svc/api/sessions");
    expect(calls[0]!.init?.method).toBe("POST");
  });

  it("posts messages as JSON", async () => {
    const { api, calls } = client(() =>
      jsonResponse({ type: "answer", bindings: [] }),
    );
    await api.sendMessage("s1", "hello");
    const init = calls[0]!.init!;
    expect(calls[0]!.url).toBe("http://svc/api/sessions/s1/messages");
    expect((init.headers as Record<string, string>)["Content-Type"]).toBe(
      "application/json",
    );
    expect(JSON.parse(String(init.body))).toEqual({ text: "hello" });
  });

  it("posts selections with word and entity", async () => {
    const { api, calls } = client(() =>
      jsonResponse({ posterior: { word: "w", n: 1, mass: [] }, status: "learning" }),
    );
    await api.sendSelection("s1", "external", "john_contractor");
    expect(JSON.parse(String(calls[0]!.init!.body))).toEqual({
      word: "external",
      entity: "john_contractor",
    });
  });

  it("encodes the posterior query parameter", async () => {
    const { api, calls } = client(() =>
      jsonResponse({ word: "a b", n: 0, mass: [] }),
    );
    await api.getPosterior("s1", "a b");
    expect(calls[0]!.url).toBe("http://svc/api/sessions/s1/posterior?word=a+b");
    expect(calls[0]!.init).toBeUndefined();
  });

  it("raises ApiError with the service's code and detail", async () => {
    const { api } = client(() =>
      jsonResponse({ error: "candidate_not_offered", detail: "not offered" }, 409),
    );
    const err = await api
      .sendSelection("s1", "w", "e")
      .then(() => null)
      .catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(409);
    expect((err as ApiError).code).toBe("candidate_not_offered");
    expect((err as ApiError).message).toBe("not offered");
  });

  it("falls back to http_error when the error body is not JSON", async () => {
    const { api } = client(
      () =>
        ({
          ok: false,
          status: 502,
          statusText: "Bad Gateway",
          json: async () => {
            throw new Error("not json");
          },
        }) as unknown as Response,
    );
    const err = (await api.getLexicon().catch((e: unknown) => e)) as ApiError;
    expect(err.code).toBe("http_error");
    expect(err.status).toBe(502);
    expect(err.message).toBe("502 Bad Gateway");
  });
});
