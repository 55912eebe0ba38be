"""Acceptance gate: one test per published criterion.

Bulk statistics run on the exponent-tracking mock backend (2 ms per
pipeline); criterion 6 replays shared randomness traces on the real
curve and checks that the mock exponents predict every real group
element and every verification verdict.
"""

import random
from fractions import Fraction

import pytest
import scipy.stats

from nomsig import contract as ct
from nomsig import scheme, trigger, zkproto
from nomsig.algebra import RealBackend
from nomsig.gasmodel import CostTable, build_report, meter_tkverify, ratio_vs_ecrecover
from nomsig.scheme import DeltaMsg, NomSignature, OpCounts, VerificationToken

from conftest import Pipeline


def make_pipelines(n, seed0=0, backend="mock", keys_every=100):
    """n honest pipelines; fresh keys every keys_every seeds."""
    out = []
    par = scheme.setup(backend=backend)
    keys = None
    for s in range(n):
        if s % keys_every == 0:
            krng = random.Random(10_000 + s)
            pk_s, sk_s = scheme.keygen_signer(par, krng)
            pk_n, sk_n = scheme.keygen_nominee(par, krng)
            keys = (pk_s, sk_s, pk_n, sk_n)
        p = Pipeline(seed0 + s, backend=backend, par=par, keys=keys)
        assert p.sigma is not None and p.tk is not None
        out.append(p)
    return out


@pytest.fixture(scope="module")
def pipelines100():
    return make_pipelines(100)


def escrow_run(p, nonce=1, sigma=None, tk=None, m=None, sig_e=None):
    """Deploy-to-trigger contract flow; returns (receipt, ledger, total_before)."""
    op = trigger.ecdsa_keygen(b"op-acc")
    inv = trigger.ecdsa_keygen(b"inv-acc")
    op_addr, inv_addr = trigger.address_of(op.vk), trigger.address_of(inv.vk)
    ledger = ct.WalletLedger({op_addr: 0, inv_addr: 1000})
    state = ct.deploy(
        p.m if m is None else m, op_addr, inv_addr, p.pk_s, p.pk_n, p.par, 100, 700
    )
    ct.pay_advance(state, ledger, 100)
    ct.store_signature(state, p.sigma if sigma is None else sigma)
    total = ledger.total_supply()
    balances_before = dict(ledger.balances)
    tx = ct.TransactionRecord(inv_addr, op_addr, 700, nonce)
    sub = ct.TriggerSubmission(
        p.tk if tk is None else tk,
        tx,
        trigger.ecdsa_sign(inv.sk, tx.serialize()) if sig_e is None else sig_e,
    )
    receipt = ct.submit_trigger(state, ledger, sub)
    assert ledger.total_supply() == total  # conservation holds either way
    if not receipt.verdict:
        assert ledger.balances == balances_before
    return receipt, ledger, state


def test_criterion_1_gas_figure(pipelines100):
    metered = []
    for p in pipelines100:
        ok, counts = p.verify()
        assert ok
        metered.append(meter_tkverify(counts))
    mean = sum(metered) / len(metered)
    assert 354_400 <= mean <= 356_400, f"mean gas {mean}"
    forced = meter_tkverify(OpCounts(pairing_pairs=8, ec_additions=256))
    assert forced == 355_400


def test_criterion_2_pairing_count(pipelines100):
    for p in pipelines100[:25]:
        ok, counts = p.verify()
        assert ok and counts.pairing_pairs == 8


def test_criterion_3_ecrecover_cost_and_ratio(pipelines100):
    assert CostTable().ecrecover == 3000
    report = build_report(OpCounts(pairing_pairs=8, ec_additions=256))
    assert report.ecrecover_gas == 3000
    assert round(float(ratio_vs_ecrecover(report)), 1) == 118.5
    ratios = []
    for p in pipelines100:
        _, counts = p.verify()
        ratios.append(float(ratio_vs_ecrecover(build_report(counts))))
    mean = sum(ratios) / len(ratios)
    assert 116 <= mean <= 122


def test_criterion_4_completeness_1000():
    pipelines = make_pipelines(1000, seed0=50_000)
    for i, p in enumerate(pipelines):
        ok, _ = p.verify()
        assert ok
        receipt, ledger, state = escrow_run(p, nonce=i + 1)
        assert receipt.verdict and state.phase is ct.Phase.EXECUTED
        assert receipt.transfer is not None


def rand_exp(rng, order):
    return rng.randrange(1, order)


def test_criterion_5_tamper_suite(pipelines100):
    rng = random.Random(777)
    rejected = 0
    for trial in range(100):
        p = pipelines100[trial]
        g1n = p.par.g1 ** rand_exp(rng, p.par.order)
        g2n = p.par.g2 ** rand_exp(rng, p.par.order)

        # delta components: the nominee must refuse to finish signing
        for bad in (
            DeltaMsg(p.delta.d1 * g1n, p.delta.d2, p.delta.d3),
            DeltaMsg(p.delta.d1, p.delta.d2 * g2n, p.delta.d3),
            DeltaMsg(p.delta.d1, p.delta.d2, p.delta.d3 * g2n),
        ):
            out = scheme.receive(p.par, p.pk_s, p.pk_n, p.m, bad, p.sk_n, rng)
            assert out is None
            rejected += 1

        # sigma components and s: stored signature no longer matches the token
        for bad_sigma in (
            NomSignature(p.sigma.s1 * g1n, p.sigma.s2, p.sigma.s3, p.sigma.s),
            NomSignature(p.sigma.s1, p.sigma.s2 * g1n, p.sigma.s3, p.sigma.s),
            NomSignature(p.sigma.s1, p.sigma.s2, p.sigma.s3 * g2n, p.sigma.s),
            NomSignature(p.sigma.s1, p.sigma.s2, p.sigma.s3, rand_exp(rng, p.par.order)),
        ):
            receipt, _, state = escrow_run(p, sigma=bad_sigma)
            assert not receipt.verdict and state.phase is ct.Phase.SIGNATURE_STORED
            rejected += 1

        # token components
        for bad_tk in (
            VerificationToken(p.tk.tk1 * g1n, p.tk.tk2),
            VerificationToken(p.tk.tk1, p.tk.tk2 * g1n),
        ):
            receipt, _, state = escrow_run(p, tk=bad_tk)
            assert not receipt.verdict
            rejected += 1

        # message stored by the contract differs from the signed one
        receipt, _, _ = escrow_run(p, m=p.m + b"!")
        assert not receipt.verdict
        rejected += 1

        # transaction signature from the wrong wallet
        mallory = trigger.ecdsa_keygen(b"mallory-%d" % trial)
        op = trigger.ecdsa_keygen(b"op-acc")
        inv = trigger.ecdsa_keygen(b"inv-acc")
        tx = ct.TransactionRecord(
            trigger.address_of(inv.vk), trigger.address_of(op.vk), 700, 1
        )
        receipt, _, _ = escrow_run(p, sig_e=trigger.ecdsa_sign(mallory.sk, tx.serialize()))
        assert not receipt.verdict
        rejected += 1

    assert rejected == 11 * 100


def test_criterion_6_mock_real_equivalence():
    real = RealBackend()
    par_real = scheme.setup(backend=real)
    par_mock = scheme.setup(backend="mock")
    g1r, g2r = par_real.g1, par_real.g2

    def predicts(mock_el, real_el):
        # the mock value is the discrete log the real element must have
        base = g1r if real_el.group == "G1" else g2r
        return base**mock_el.value == real_el

    keys = {}
    for trace in range(100):
        kseed = 90_000 + trace // 10  # fresh keys every 10 traces
        if kseed not in keys:
            km, kr = random.Random(kseed), random.Random(kseed)
            mk = scheme.keygen_signer(par_mock, km) + scheme.keygen_nominee(par_mock, km)
            rk = scheme.keygen_signer(par_real, kr) + scheme.keygen_nominee(par_real, kr)
            keys[kseed] = (mk, rk)
        (pk_s_m, sk_s_m, pk_n_m, sk_n_m), (pk_s_r, sk_s_r, pk_n_r, sk_n_r) = keys[kseed]
        assert predicts(pk_s_m.gS, pk_s_r.gS) and predicts(pk_n_m.x1, pk_n_r.x1)

        seed = 80_000 + trace
        pm = Pipeline(seed, par=par_mock, keys=(pk_s_m, sk_s_m, pk_n_m, sk_n_m))
        pr = Pipeline(seed, par=par_real, keys=(pk_s_r, sk_s_r, pk_n_r, sk_n_r))
        assert pm.m == pr.m  # identical message stream from the shared seed

        # the shared scalar trace forces identical exponents on every
        # element derived purely from drawn randomness (d3 and s3 fold in
        # hashes of backend-specific serializations, so only their
        # verification outcomes, not their discrete logs, must agree)
        for mock_el, real_el in (
            (pm.delta.d1, pr.delta.d1),
            (pm.delta.d2, pr.delta.d2),
            (pm.sigma.s1, pr.sigma.s1),
            (pm.sigma.s2, pr.sigma.s2),
            (pm.tk.tk1, pr.tk.tk1),
            (pm.tk.tk2, pr.tk.tk2),
        ):
            assert predicts(mock_el, real_el)
        assert pm.sigma.s == pr.sigma.s

        assert scheme.delta_checks(par_mock, pk_s_m, pk_n_m, pm.m, pm.delta) == (
            scheme.delta_checks(par_real, pk_s_r, pk_n_r, pr.m, pr.delta)
        )
        ok_m, cm = pm.verify()
        ok_r, cr = pr.verify()
        assert ok_m and ok_r
        assert cm.pairing_pairs == cr.pairing_pairs == 8

        if trace % 10 == 0:
            # a tampered verdict must flip identically on both backends
            bad_m = NomSignature(pm.sigma.s1, pm.sigma.s2, pm.sigma.s3, (pm.sigma.s + 1) % par_mock.order)
            bad_r = NomSignature(pr.sigma.s1, pr.sigma.s2, pr.sigma.s3, (pr.sigma.s + 1) % par_real.order)
            vm, _ = scheme.tk_verify(par_mock, pk_s_m, pk_n_m, pm.m, bad_m, pm.tk)
            vr, _ = scheme.tk_verify(par_real, pk_s_r, pk_n_r, pr.m, bad_r, pr.tk)
            assert vm == vr == False  # noqa: E712


def test_criterion_7_delta_consistency_check():
    par = scheme.setup(backend="mock")
    rng = random.Random(123)
    pk_s, sk_s = scheme.keygen_signer(par, rng)
    pk_n, sk_n = scheme.keygen_nominee(par, rng)
    for trial in range(100):
        m = b"msg %d" % trial
        honest = scheme.sign(par, pk_s, pk_n, m, sk_s, rng)
        shift = rng.randrange(1, par.order)
        # d2 exponent no longer matches d1; the Waters equation alone cannot see it
        bad = DeltaMsg(honest.d1, honest.d2 * par.g2**shift, honest.d3)
        assert scheme.receive(par, pk_s, pk_n, m, bad, sk_n, rng) is None


def test_criterion_8_confirm_disavow():
    par = scheme.setup(backend="mock")
    master = random.Random(888)
    statements = []
    for i in range(10):
        p = Pipeline(70_000 + i, backend="mock")
        valid = zkproto.derive_statement(p.par, p.pk_s, p.pk_n, p.m, p.sigma)
        bad_sigma = NomSignature(p.sigma.s1, p.sigma.s2, p.sigma.s3 * p.par.g2, p.sigma.s)
        invalid = zkproto.derive_statement(p.par, p.pk_s, p.pk_n, p.m, bad_sigma)
        statements.append((p, valid, invalid))

    # completeness 100/100 for each protocol
    for p, valid, invalid in statements:
        for _ in range(10):
            ok, _ = zkproto.run_confirm(valid, p.sk_n, master, master)
            assert ok
            ok, _ = zkproto.run_disavow(invalid, p.sk_n, master, master)
            assert ok

    # wrong-witness provers: 0/100 accepted
    accepted = 0
    for p, valid, _ in statements:
        for _ in range(10):
            fake = scheme.NomineeSecretKey(
                p.sk_n.alphaN, p.sk_n.vPrime,
                master.randrange(1, par.order), master.randrange(1, par.order),
            )
            ok, _ = zkproto.run_confirm(valid, fake, master, master)
            accepted += ok
    assert accepted == 0

    # special soundness recovers the nominee key
    p, valid, _ = statements[0]
    b = valid.backend
    prover = zkproto.ConfirmProver(valid, p.sk_n, master)
    c1, rho1 = b.random_scalar(master), b.random_scalar(master)
    c2, rho2 = b.random_scalar(master), b.random_scalar(master)
    first = prover.first_message(zkproto.ChallengeCommitment(zkproto.commit_challenge(b, c1, rho1)))
    r1 = prover.response(zkproto.ChallengeOpening(c1, rho1))
    prover._com = zkproto.ChallengeCommitment(zkproto.commit_challenge(b, c2, rho2))
    r2 = prover.response(zkproto.ChallengeOpening(c2, rho2))
    assert zkproto.extract_confirm_witness(valid, first, c1, r1, c2, r2) == (p.sk_n.y1, p.sk_n.y2)

    # simulated transcripts verify and are distributed like real ones
    buckets = 16
    n_runs = 10_000
    real_counts = [0] * buckets
    sim_counts = [0] * buckets
    for _ in range(n_runs):
        ok, tr = zkproto.run_confirm(valid, p.sk_n, master, master)
        assert ok
        real_counts[tr.response.z1 * buckets // par.order] += 1
        sim = zkproto.simulate_transcript(valid, "confirm", master)
        assert sim.verdict
        sim_counts[sim.response.z1 * buckets // par.order] += 1
    _, pvalue, _, _ = scipy.stats.chi2_contingency([real_counts, sim_counts])
    assert pvalue > 0.01, f"distribution test p={pvalue}"


def test_criterion_9_waters_component():
    par = scheme.setup(backend="mock")
    rng = random.Random(999)
    pk_s, sk_s = scheme.keygen_signer(par, rng)
    pk_n, _ = scheme.keygen_nominee(par, rng)
    for trial in range(100):
        m = rng.randbytes(rng.randrange(1, 100))
        delta = scheme.sign(par, pk_s, pk_n, m, sk_s, rng)
        waters_ok, consistent = scheme.delta_checks(par, pk_s, pk_n, m, delta)
        assert waters_ok and consistent
