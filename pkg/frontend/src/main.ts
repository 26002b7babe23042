import { ApiClient, DEFAULT_BASE } from "./api.js";
import { boot } from "./app.js";

declare global {
  interface Window {
    LEXLEARN_API?: string;
  }
}

const params = new URLSearchParams(window.location.search);
const base = params.get("api") ?? window.LEXLEARN_API ?? DEFAULT_BASE;
const root = document.getElementById("app");
if (root) {
  boot(root, new ApiClient(base)).catch((err) => {
    root.textContent = `Could not reach the service at ${base}: ${err}`;
  });
}
