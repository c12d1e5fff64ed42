"""FastAPI service wrapping the coexistence library."""

from __future__ import annotations

from dataclasses import asdict

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..analytic import BudgetExceededError, EnumerationBudget, evaluate_exact
from ..dcf import ConvergenceError, PmfValidityError, solve_fixed_point
from ..mc import McConfig, reference_run, run_scenario
from ..oracle import simulate_bss
from ..params import ConfigError, ms_to_slots, slots_to_ms
from ..sweep import ScenarioDefaults, SweepSpec, run_sweep
from ..timeline import DutyCycle
from . import schemas as s

_CLIENT_ERRORS = (ConfigError, ValueError, BudgetExceededError,
                  ConvergenceError, PmfValidityError)


def create_app() -> FastAPI:
    app = FastAPI(title="lteu-coex",
                  description="Saturated Wi-Fi DCF performance and fairness "
                              "under duty-cycled LTE-U interference")

    async def _domain_error(request: Request, exc: Exception):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    for exc_type in _CLIENT_ERRORS:
        app.add_exception_handler(exc_type, _domain_error)

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.post("/solve", response_model=s.SolveResponse)
    def solve(req: s.SolveRequest) -> s.SolveResponse:
        params = req.params.to_params()
        sol = solve_fixed_point(params)
        return s.SolveResponse(
            tau=sol.tau, p_c=sol.p_c, p_s=sol.p_s,
            t_s_slots=sol.t_s, t_c_slots=sol.t_c,
            mean_td_slots=sol.mean_td,
            mean_td_ms=slots_to_ms(sol.mean_td, params.slot_us),
            residual=sol.residual)

    @app.post("/run", response_model=s.RunResponse)
    def run(req: s.RunRequest) -> s.RunResponse:
        params = req.params.to_params()
        sol = solve_fixed_point(params)
        dc = DutyCycle(period_slots=ms_to_slots(req.period_ms, params.slot_us),
                       alpha=req.duty)
        cfg = McConfig(packets=req.packets, seed=req.seed, regime=req.mode,
                       sampled_td=req.sampled_td,
                       warmup_packets=req.warmup_packets)
        est = run_scenario(sol, dc, req.q, cfg)
        return s.RunResponse(**asdict(est))

    @app.post("/reference", response_model=s.RunResponse)
    def reference(req: s.ReferenceRequest) -> s.RunResponse:
        sol = solve_fixed_point(req.params.to_params())
        cfg = McConfig(packets=req.packets, seed=req.seed, regime="weak",
                       warmup_packets=req.warmup_packets)
        return s.RunResponse(**asdict(reference_run(sol, cfg)))

    @app.post("/sweep", response_model=s.SweepResponse)
    def sweep(req: s.SweepRequest) -> s.SweepResponse:
        defaults = ScenarioDefaults(period_ms=req.period_ms, alpha=req.alpha,
                                    q=req.q, payload_bytes=req.payload_bytes,
                                    stations=req.stations,
                                    wifi=req.params.to_params())
        spec = SweepSpec(variable=req.variable, values=tuple(req.values),
                         fixed=defaults, regimes=tuple(req.regimes),
                         packets=req.packets,
                         warmup_packets=req.warmup_packets, seed=req.seed,
                         seed_policy=req.seed_policy, threads=req.threads)
        rows = [s.SweepRowModel(**asdict(row)) for row in run_sweep(spec)]
        return s.SweepResponse(rows=rows)

    @app.post("/exact", response_model=s.ExactResponse)
    def exact(req: s.ExactRequest) -> s.ExactResponse:
        params = req.params.to_params()
        sol = solve_fixed_point(params)
        dc = DutyCycle(period_slots=req.period_slots, alpha=req.alpha)
        budget = EnumerationBudget(max_paths=req.max_paths)
        result = evaluate_exact(sol, dc, req.q, req.mode, budget)
        rows = [s.ExactRow(t0=d.t0, p_drop=d.p_drop, mean_d_slots=d.mean_d,
                           mean_r_bits_per_slot=d.mean_r,
                           pi=float(result.chain.pi[d.t0]))
                for d in result.dists]
        return s.ExactResponse(rows=rows, e_r=result.e_r, e_d=result.e_d,
                               e_r_ratio=result.e_r_ratio,
                               drop_rate=result.drop_rate)

    @app.post("/validate", response_model=s.ValidateResponse)
    def validate(req: s.ValidateRequest) -> s.ValidateResponse:
        params = req.params.to_params()
        sol = solve_fixed_point(params)
        emp = simulate_bss(params, req.horizon_slots, req.seed)
        solved_pmf = {int(v): p for v, p in zip(sol.td_support, sol.td_probs)}
        pc_ok = abs(sol.p_c - emp.p_c) <= req.p_c_tolerance
        td_ok = all(abs(solved_pmf.get(d, 0.0) - emp.td_pmf.get(d, 0.0))
                    <= req.td_atom_tolerance
                    for d in set(solved_pmf) | set(emp.td_pmf))
        return s.ValidateResponse(
            solved_p_c=sol.p_c, empirical_p_c=emp.p_c,
            solved_tau=sol.tau, empirical_tau=emp.tau,
            solved_mean_td=sol.mean_td, empirical_mean_td=emp.mean_td,
            solved_td_pmf=solved_pmf, empirical_td_pmf=emp.td_pmf,
            p_c_ok=pc_ok, td_pmf_ok=td_ok, passed=pc_ok and td_ok)

    return app


app = create_app()
