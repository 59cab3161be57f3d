import json
from fractions import Fraction
from pathlib import Path

import jsonschema
import pytest

from lucascert import proof
from lucascert.certified import EnclosureContext
from lucascert.proof import (InequalityParams, ProofConfig, StepStatus,
                             run_full_proof, run_step)

SCHEMA = json.loads(
    (Path(__file__).parent.parent / "src" / "lucascert" / "schema" /
     "certificate.schema.json").read_text())

# small ranges keep the pipeline subsecond while still exercising every step
SMALL = ProofConfig(identity_limit=120, chain_limit=35, partition_limit=35,
                    reciprocal_limit=35, small_scan_limit=600,
                    wall_exact_limit=100, exception_scan_limit=60,
                    inequality_limit=2500, wall_limit=2500,
                    monotone_limit=2500, ratio_instance_limit=40)


@pytest.fixture(scope="module")
def small_certificate():
    return run_full_proof(SMALL)


def test_params_canonical():
    params = InequalityParams.create()
    assert params.c1 == Fraction(9, 10)
    assert params.c2 == Fraction(11, 5)
    assert params.violations() == []
    assert float(params.log_alpha.lo) == pytest.approx(0.4812118250596035)
    assert float(params.log_two.lo) == pytest.approx(0.6931471805599453)


def test_params_violations_detected():
    corrupted = InequalityParams.create(c1=Fraction(0))
    assert corrupted.violations()


def test_step_constants():
    step = proof.step_constants(ProofConfig())
    assert step.status is StepStatus.VERIFIED
    assert step.evidence["minimal_index"] == 92
    assert step.evidence["product"] == "16294579238595022365"
    assert int(step.evidence["lucas_below"]) < 16294579238595022365
    assert int(step.evidence["lucas_at"]) >= 16294579238595022365


def test_step_even_case():
    step = proof.step_even_case(2000)
    assert step.status is StepStatus.VERIFIED
    assert step.evidence["failures"] == []
    assert step.evidence["max_two_adic_valuation"] <= 1


def test_step_three_mod_four():
    step = proof.step_three_mod_four_case(2000)
    assert step.status is StepStatus.VERIFIED
    assert step.evidence["period"] == 12
    assert step.evidence["residues"] == [2, 1, 3, 4, 7, 3, 2, 5, 7, 4, 3, 7,
                                         2, 1]
    assert step.evidence["max_two_adic_valuation"] <= 4


def test_step_chain_instances():
    step = proof.step_chain_instances(101, ProofConfig().budget())
    assert step.status is StepStatus.VERIFIED
    assert step.evidence["failures"] == []
    assert step.evidence["skipped_incomplete"] == []
    by_n = {inst["n"]: inst for inst in step.evidence["instances"]}
    assert by_n[25]["p1"] == 5 and by_n[25]["tau"] == 2
    assert by_n[25]["epsilon"] is None  # no Lehmer premise, no designated side
    assert [entry[0] for entry in by_n[25]["chain"]] == [5, 25]
    assert by_n[13]["chain"] == [[13, "521", 1]]
    # every odd prime >= 5 up to the limit appears as its own instance
    assert 97 in by_n and by_n[97]["tau"] == 1


def test_step_small_prime_cases():
    step = proof.step_p1_small_cases(10_000)
    assert step.status is StepStatus.VERIFIED
    assert step.evidence["seven_rank"] == 8
    assert step.evidence["seven_wall_exponent"] == 1
    assert step.evidence["five_property_holds"] is True


def test_step_tau_ingredients_small():
    cfg = ProofConfig(small_scan_limit=800, wall_exact_limit=120)
    step = proof.step_tau_ingredients(cfg)
    assert step.status is StepStatus.VERIFIED
    assert step.evidence["tau_failures"] == []
    assert step.evidence["rank_failures"] == []
    assert step.evidence["wall_failures"] == []


def test_step_ratio_instances_vacuous():
    step = proof.step_ratio_instances(60, ProofConfig().budget(),
                                      InequalityParams.create())
    assert step.status is StepStatus.VERIFIED
    assert step.evidence["vacuous"] is True
    assert step.evidence["instances"] == []


def test_step_reciprocal_instances():
    step = proof.step_reciprocal_instances(41, ProofConfig().budget(),
                                           InequalityParams.create())
    assert step.status is StepStatus.VERIFIED
    checks = {c["index"]: c for c in step.evidence["checks"]}
    assert checks[11]["lhs"] == "1/198"
    assert checks[15]["lhs"] == "1/30"
    assert all(c["holds"] for c in step.evidence["checks"])


def test_step_partition_instances():
    step = proof.step_partition_instances(45, ProofConfig().budget(),
                                          InequalityParams.create())
    assert step.status is StepStatus.VERIFIED
    assert step.evidence["equality_failures"] == []
    assert step.evidence["bound_failures"] == []


def test_step_monotone_support():
    step = proof.step_monotone_support(3000, InequalityParams.create())
    assert step.status is StepStatus.VERIFIED
    assert step.evidence["failures"] == []


def test_step_inequality_scan_satisfying_set():
    step = proof.step_inequality_scan(2500, 1800, InequalityParams.create())
    assert step.status is StepStatus.VERIFIED
    assert step.evidence["satisfying_primes"] == [5]
    assert step.evidence["largest_satisfying"] == 5
    assert step.evidence["satisfying_beyond_threshold"] == []


def test_step_final_contradiction():
    step = proof.step_final_contradiction(97, 1800,
                                          InequalityParams.create())
    assert step.status is StepStatus.VERIFIED
    assert step.evidence["failures"] == []
    assert step.evidence["primes_checked"] == 254  # pi(1800) - pi(96)


def test_step_wall_range_small():
    step = proof.step_wall_range(2000, partitions=3, workers=1)
    assert step.status is StepStatus.VERIFIED
    assert step.evidence["exceptions"] == []


def test_full_pipeline_small(small_certificate):
    cert = small_certificate
    assert cert.overall_status == "verified_with_assumptions"
    assert [s.id for s in cert.steps] == list(proof.STEP_IDS)
    assert cert.assumptions == ("assume-omega-lower-bound",
                                "assume-primitive-divisor-theorem",
                                "assume-reciprocal-sum-bound",
                                "assume-wall-exponent-range")
    statuses = {s.id: s.status for s in cert.steps}
    assert all(statuses[a] is StepStatus.ASSUMED for a in cert.assumptions)
    assert all(status in (StepStatus.VERIFIED, StepStatus.ASSUMED)
               for status in statuses.values())


def test_certificate_schema(small_certificate):
    jsonschema.validate(small_certificate.to_dict(), SCHEMA)


def test_certificate_deterministic():
    # byte-identical JSON across runs with the same configuration
    first = run_full_proof(SMALL).to_json()
    second = run_full_proof(SMALL).to_json()
    assert first == second


def test_negative_control_c1_zero():
    sabotaged = ProofConfig(
        identity_limit=SMALL.identity_limit, chain_limit=SMALL.chain_limit,
        partition_limit=SMALL.partition_limit,
        reciprocal_limit=SMALL.reciprocal_limit,
        small_scan_limit=SMALL.small_scan_limit,
        wall_exact_limit=SMALL.wall_exact_limit,
        exception_scan_limit=SMALL.exception_scan_limit,
        inequality_limit=SMALL.inequality_limit, wall_limit=SMALL.wall_limit,
        monotone_limit=SMALL.monotone_limit,
        ratio_instance_limit=SMALL.ratio_instance_limit,
        c1=Fraction(0))
    cert = run_full_proof(sabotaged)
    assert cert.overall_status == "failed"
    failed = [s for s in cert.steps if s.status is StepStatus.FAILED]
    assert failed, "corrupting c1 must fail at least one step"
    witness = failed[0].evidence["witness_prime"]
    assert isinstance(witness, int) and witness >= 2
    assert failed[0].evidence["invariant_violations"]
    # pipeline aborts at the first failure
    assert cert.steps[-1].status is StepStatus.FAILED


def test_negative_control_witnesses_per_step():
    corrupted = InequalityParams.create(c1=Fraction(0))
    scan = proof.step_inequality_scan(2500, 1800, corrupted)
    assert scan.status is StepStatus.FAILED
    assert scan.evidence["witness_prime"] == 2
    final = proof.step_final_contradiction(97, 1800, corrupted)
    assert final.status is StepStatus.FAILED
    assert final.evidence["witness_prime"] == 97
    recip = proof.step_reciprocal_instances(35, ProofConfig().budget(),
                                            corrupted)
    assert recip.status is StepStatus.FAILED
    assert recip.evidence["witness_prime"] == 11


def test_inequality_scan_stable_across_precision():
    params = InequalityParams.create()
    base, _ = proof.inequality_scan(2500, params)
    for bits in (256, 512):
        escalated, _ = proof.inequality_scan(2500, params, bits=bits)
        assert escalated == base


def test_run_step_by_id():
    step = run_step("constants", ProofConfig())
    assert step.id == "constants"
    with pytest.raises(KeyError):
        run_step("no-such-step", ProofConfig())


def test_step_id_listing_matches_producers():
    assert tuple(proof._producers(SMALL)) == proof.STEP_IDS


def test_enclosure_evidence_shape(small_certificate):
    # the failed-step path serializes enclosures; check the shared helper
    ctx = EnclosureContext(128)
    doc = proof.enclosure_evidence(ctx.log_two(), 128)
    assert set(doc) == {"interval", "precision_bits"}
    lo, hi = doc["interval"]
    assert float(lo) <= 0.6931471805599453 <= float(hi)
