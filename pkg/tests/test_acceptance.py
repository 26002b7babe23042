"""End-to-end acceptance checks.

One test per release criterion; each prints a PASS line so the run
reads as a checklist. Run with `pytest tests/test_acceptance.py -v -s`.
"""

import dataclasses
import random
import statistics
import time
from fractions import Fraction

import pytest
from fastapi.testclient import TestClient

from lexlearn.data import hr1099_path
from lexlearn.elicitation import (
    ElicitationConfig,
    expected_entropy_after,
    select_candidates,
)
from lexlearn.inference import (
    build_space,
    entropy,
    likelihood,
    make_space,
    posterior_batch,
    posterior_update,
)
from lexlearn.ontology import load_ontology
from lexlearn.service import ServiceConfig, create_app
from lexlearn.session import Lexicon, Session, read_event_log
from lexlearn.simulate import run_batch, run_scenario

import oracles

CONTRACTOR_PAIR_POSTERIOR = {
    "contractor": Fraction(12, 13),
    "supplier": Fraction(1, 13),
}


def test_criterion_1_fixture_trajectory(hr_ontology):
    started = time.perf_counter()
    result = run_scenario(
        hr_ontology,
        "external",
        ["John Contractor", "Mary Lawyer"],
        ElicitationConfig(threshold=0.9),
    )
    elapsed = time.perf_counter() - started

    step1 = {m["node"]: m["p"] for m in result.steps[1]["mass"]}
    expected1 = {
        "john_contractor": Fraction(18, 25),
        "contractor": Fraction(6, 25),
        "supplier": Fraction(1, 25),
    }
    for node, frac in expected1.items():
        assert abs(step1[node] - float(frac)) <= 1e-9
    for node, p in step1.items():
        if node not in expected1:
            assert p == 0.0

    step2 = {m["node"]: m["p"] for m in result.steps[2]["mass"]}
    for node, frac in CONTRACTOR_PAIR_POSTERIOR.items():
        assert abs(step2[node] - float(frac)) <= 1e-9
    for node, p in step2.items():
        if node not in CONTRACTOR_PAIR_POSTERIOR:
            assert p == 0.0

    assert result.commit_step == 2
    assert result.committed_node == "contractor"
    assert elapsed < 1.0
    print(
        f"\n[acceptance] criterion 1: PASS "
        f"(step-1 and step-2 posteriors exact, commit at 2, {elapsed:.3f}s)"
    )


def test_criterion_2_oracle_equivalence():
    started = time.perf_counter()
    checked = 0
    for seed in range(100):
        rng = random.Random(1000 + seed)
        doc = oracles.random_tree_doc(rng, max_nodes=50)
        ontology = load_ontology(doc)
        observations = oracles.random_observations(doc, rng, max_len=5)

        space = build_space(ontology, "w")
        batch = posterior_batch(space, observations)
        folded = posterior_batch(space, [])
        for x in observations:
            folded = posterior_update(folded, x)
        brute = oracles.posterior(doc, observations)

        nodes = {h.node for h in space.hypotheses}
        assert set(brute) == nodes
        for node in nodes:
            b = float(batch.mass[node])
            f = float(folded.mass[node])
            o = float(brute[node])
            assert abs(b - f) <= 1e-9
            assert abs(b - o) <= 1e-9
            checked += 1
    elapsed = time.perf_counter() - started
    assert elapsed < 10.0
    print(
        f"\n[acceptance] criterion 2: PASS "
        f"(100 random trees, {checked} masses, three-way agreement, {elapsed:.2f}s)"
    )


def test_criterion_3_size_principle_exact(hr_ontology):
    rng = random.Random(42)
    samples = 0
    while samples < 1000:
        doc = oracles.random_tree_doc(rng, max_nodes=30)
        ontology = load_ontology(doc)
        space = build_space(ontology, "w")
        hypotheses = list(space.hypotheses)
        n = rng.randint(1, 5)
        h1, h2 = rng.choice(hypotheses), rng.choice(hypotheses)
        common = sorted(h1.extension & h2.extension)
        if not common:
            continue
        observations = [rng.choice(common) for _ in range(n)]
        ratio = likelihood(h1, observations) / likelihood(h2, observations)
        expected = Fraction(h2.extension_size, h1.extension_size) ** n
        assert ratio == expected  # exact rational identity
        samples += 1
    print(
        "\n[acceptance] criterion 3: PASS "
        "(1000 sampled ratios equal (ext2/ext1)^n exactly)"
    )


def test_criterion_4_prior_scale_invariance(hr_ontology):
    rng = random.Random(77)
    cases = [build_space(hr_ontology, "w")]
    for _ in range(20):
        doc = oracles.random_tree_doc(rng, max_nodes=40)
        cases.append(build_space(load_ontology(doc), "w"))

    checked = 0
    for space in cases:
        entities = sorted(space.hypotheses[0].universe)
        observations = [rng.choice(entities) for _ in range(rng.randint(0, 4))]
        base = posterior_batch(space, observations)
        for c in (Fraction(1, 2), 3, 1000):
            scaled_space = make_space(
                space.word,
                [
                    dataclasses.replace(h, prior_weight=h.prior_weight * c)
                    for h in space.hypotheses
                ],
            )
            scaled = posterior_batch(scaled_space, observations)
            for node, mass in base.mass.items():
                assert abs(float(scaled.mass[node]) - float(mass)) <= 1e-12
                checked += 1
    print(
        f"\n[acceptance] criterion 4: PASS "
        f"(c in {{0.5, 3, 1000}} leaves {checked} masses unchanged)"
    )


def test_criterion_5_elicitation_properties(hr_ontology):
    cfg = ElicitationConfig()
    rng = random.Random(4040)
    infogain_checked = 0
    for run in range(100):
        doc = oracles.random_tree_doc(rng, max_nodes=25)
        ontology = load_ontology(doc)
        space = build_space(ontology, "w")
        entities = sorted(space.hypotheses[0].universe)
        observations = [rng.choice(entities) for _ in range(rng.randint(0, 3))]
        posterior = posterior_batch(space, observations)

        for strategy in ("infogain", "diverse"):
            scfg = dataclasses.replace(cfg, strategy=strategy, k=rng.randint(1, 4))
            picks = select_candidates(ontology, posterior, scfg)
            again = select_candidates(ontology, posterior, scfg)
            assert picks == again  # deterministic
            assert len(set(picks)) == len(picks)  # duplicate-free
            assert 1 <= len(picks) <= min(scfg.k, len(entities))

        candidates = list(select_candidates(ontology, posterior, cfg))
        ee = expected_entropy_after(ontology, posterior, candidates)
        assert ee <= entropy(posterior) + 1e-12
        infogain_checked += 1
    print(
        f"\n[acceptance] criterion 5: PASS "
        f"({infogain_checked} runs: deterministic, duplicate-free, information never hurts)"
    )


def test_criterion_6_event_replay(hr_ontology, tmp_path):
    words = ["externals", "vendors", "payees", "freelancers", "clients"]
    for seed in range(50):
        rng = random.Random(9000 + seed)
        workdir = tmp_path / f"s{seed}"
        workdir.mkdir()
        lexicon = Lexicon(workdir / "lexicon.json")
        session = Session(
            hr_ontology,
            lexicon,
            ElicitationConfig(),
            session_id=f"s{seed}",
            log_path=workdir / "log.jsonl",
        )
        for _ in range(rng.randint(1, 12)):
            if session.active_word and rng.random() < 0.7:
                episode = session.episodes[session.active_word]
                session.handle_selection(
                    session.active_word, rng.choice(episode.pending_candidates)
                )
            else:
                session.handle_message(f"1099 for {rng.choice(words)}")

        events = read_event_log(workdir / "log.jsonl")
        twin = Session.replay(events, hr_ontology, config=ElicitationConfig())

        assert twin.active_word == session.active_word
        assert twin.queue == session.queue
        assert set(twin.episodes) == set(session.episodes)
        for word, live in session.episodes.items():
            replayed = twin.episodes[word]
            assert replayed.status == live.status
            assert replayed.observations == live.observations
            assert replayed.pending_candidates == live.pending_candidates
            for node, mass in live.posterior.mass.items():
                assert abs(float(replayed.posterior.mass[node]) - float(mass)) <= 1e-9
        assert twin.lexicon.as_dict() == session.lexicon.as_dict()
    print("\n[acceptance] criterion 6: PASS (50 randomized sessions replay identically)")


def test_criterion_7_golden_http_transcript(tmp_path):
    config = ServiceConfig(
        ontology_path=str(hr1099_path()),
        lexicon_path=str(tmp_path / "lexicon.json"),
        event_log_dir=str(tmp_path / "logs"),
    )
    client = TestClient(create_app(config))

    sid = client.post("/api/sessions").json()["session_id"]
    opened = client.post(
        f"/api/sessions/{sid}/messages", json={"text": "1099 for externals"}
    ).json()
    assert opened["type"] == "elicitation"
    assert opened["word"] == "external"

    first = client.post(
        f"/api/sessions/{sid}/selections",
        json={"word": "external", "entity": "john_contractor"},
    ).json()
    assert first["status"] == "learning"

    second = client.post(
        f"/api/sessions/{sid}/selections",
        json={"word": "external", "entity": "mary_lawyer"},
    ).json()
    assert second["status"] == "committed"
    assert second["committed_node"] == "contractor"
    top = second["posterior"]["mass"][0]
    assert top["node"] == "contractor"
    assert abs(top["p"] - 12 / 13) <= 1e-9
    print(
        "\n[acceptance] criterion 7: PASS "
        f"(dialogue committed contractor at p={top['p']:.10f})"
    )


def test_criterion_8_batch_comparison(hr_ontology):
    entities = ("john_contractor", "mary_lawyer", "mike_lawyer")
    ordered_pairs = [(a, b) for a in entities for b in entities if a != b]
    # 3 entities give 6 distinct ordered pairs; the full 3x3 grid also
    # holds the 3 same-entity pairs, which must NOT commit at step 2.
    for first, second in ordered_pairs:
        result = run_scenario(hr_ontology, "w", [first, second])
        assert result.commit_step == 2
        assert result.committed_node == "contractor"
    for entity in entities:
        result = run_scenario(hr_ontology, "w", [entity, entity])
        assert result.commit_step is None

    trials = 40
    report = run_batch(
        hr_ontology,
        trials=trials,
        learner="rule_intersection",
        seed=13,
        true_concept="contractor",
    )
    assert report.failures == trials
    print(
        "\n[acceptance] criterion 8: PASS "
        "(all distinct ordered pairs commit contractor at step 2; "
        f"rule_intersection fails {trials}/{trials})"
    )
