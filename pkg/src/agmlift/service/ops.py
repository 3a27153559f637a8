"""Handlers behind the HTTP endpoints; the CLI calls them in-process."""

from __future__ import annotations

from random import Random

from .. import selftest as selftest_mod
from ..agm import AgmState, agm_iterate, projective_ratios
from ..canlift import ThetaPoint, lift_canonical, residual_general, residual_level2
from ..counting import CountResult, CurveSpec, count_points
from ..errors import InvalidCurveError, InvalidInputError, PrecisionError
from ..padic import ABOVE_PRECISION, PadicField
from .models import (
    AgmRequest,
    AgmResponse,
    AgmStepReport,
    CountBatchRequest,
    CountBatchResponse,
    CountRequest,
    CountResponse,
    CurveIn,
    LiftRequest,
    LiftResponse,
    RelationReport,
    SelftestRequest,
    SelftestResponse,
    VerifyRequest,
    VerifyResponse,
)


def _parse_bits(text: str, what: str) -> int:
    try:
        v = int(text, 16)
    except ValueError:
        raise InvalidCurveError(f"{what} is not a hex bitmask: {text!r}")
    if v < 0:
        raise InvalidCurveError(f"{what} must be nonnegative")
    return v


def _enc_val(v):
    return None if v is ABOVE_PRECISION else int(v)


def _count_one(curve: CurveSpec, rng_seed: int) -> CountResponse:
    result: CountResult = count_points(curve, rng_seed=rng_seed)
    return CountResponse(**result.to_json())


def run_count(req: CountRequest) -> CountResponse:
    if req.random:
        rng = Random(f"agmlift-random-curve-{req.rng_seed}-{req.d}")
        q = 1 << req.d
        curve = CurveSpec(req.d, rng.randrange(q), rng.randrange(1, q))
    else:
        if req.a2 is None or req.a6 is None:
            raise InvalidCurveError("need a2 and a6 (or random=true)")
        curve = CurveSpec(req.d, _parse_bits(req.a2, "a2"), _parse_bits(req.a6, "a6"))
    return _count_one(curve, req.rng_seed)


def run_count_batch(req: CountBatchRequest) -> CountBatchResponse:
    results = []
    for item in req.curves:
        curve = CurveSpec(item.d, _parse_bits(item.a2, "a2"), _parse_bits(item.a6, "a6"))
        results.append(_count_one(curve, req.rng_seed))
    return CountBatchResponse(results=results)


def _field_for(d: int, N: int, f: str | None) -> PadicField:
    return PadicField(d, N, f=int(f, 16) if f else None)


def run_lift(req: LiftRequest) -> LiftResponse:
    field = _field_for(req.d, req.precision, req.f)
    seeds = tuple(_parse_bits(s, "seed") for s in req.seed)
    result = lift_canonical(req.g, field, seeds, req.precision)
    return LiftResponse(**result.to_json())


def run_agm(req: AgmRequest) -> AgmResponse:
    field = _field_for(req.d, req.precision, req.f)
    n = 1 << req.g
    if len(req.start) != n:
        raise InvalidInputError(f"start needs {n} coordinates for g={req.g}")
    coords = []
    for entry in req.start:
        if isinstance(entry, int):
            coords.append(field.from_int(entry))
        else:
            coords.append(field.element_from_json(entry))
    one = field.one()
    if not all((c - one).is_zero_mod(req.g + 2) for c in coords):
        raise PrecisionError(
            f"start coordinates must lie in 1 + 2^{req.g + 2} Z_q"
        )
    state = AgmState(coords)
    states, report = agm_iterate(state, req.steps)
    final = states[-1]
    return AgmResponse(
        g=req.g,
        d=req.d,
        N=req.precision,
        steps=[AgmStepReport(**entry) for entry in report.to_json()],
        final=[c.to_json() for c in final.coords],
        ratios=[c.to_json() for c in projective_ratios(final)],
    )


def run_verify(req: VerifyRequest) -> VerifyResponse:
    field = _field_for(req.d, req.N, req.f)
    size = (1 << req.level_exp) ** req.g
    if len(req.point) != size:
        raise InvalidInputError(f"point needs {size} coordinates")
    coords = [field.element_from_json(doc) for doc in req.point]
    point = ThetaPoint(req.g, req.level_exp, coords)
    omega = field.element_from_json(req.omega)
    relations = []
    vals = []
    if req.level_exp == 1:
        residuals = residual_level2(point, omega)
        for rank, r in enumerate(residuals):
            v = r.valuation()
            vals.append(v)
            relations.append(
                RelationReport(u=list(point.index.unrank(rank)), valuation=_enc_val(v))
            )
    else:
        residuals = residual_general(point, omega)
        for (u, v_idx), r in sorted(residuals.items()):
            v = r.valuation()
            vals.append(v)
            relations.append(
                RelationReport(u=list(u), v=list(v_idx), valuation=_enc_val(v))
            )
    finite = [v for v in vals if v is not ABOVE_PRECISION]
    min_val = None if not finite else int(min(finite))
    return VerifyResponse(
        relations=relations,
        min_valuation=min_val,
        point_canonical_mod2=point.is_canonical_mod2(),
    )


def run_selftest(req: SelftestRequest) -> SelftestResponse:
    report = selftest_mod.run(names=req.only, rng_seed=req.rng_seed)
    return SelftestResponse(**report)
