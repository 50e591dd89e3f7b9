use std::io::Write;
use std::path::{Path, PathBuf};

use riccati_core::baselines::{integrate_explicit, ExplicitScheme};
use riccati_core::cases::{
    figure13_report, oscillator_case, square_root_case, validate_figure13 as check_reference,
    vehicle_candidate_a, vehicles_case, wave_case, CaseSpec, Figure13Reference, OscillatorParams,
    VehicleWeighting, WaveParams, FIGURE13_FILE, FIGURE13_MATCH_TOL,
};
use riccati_core::csv::{comparison_csv, format_g17, trajectory_csv};
use riccati_core::scalar::{order_study, ScalarProblem};
use riccati_core::scheme::{
    integrate, mu_is_admissible, select_mu, solve_steady, RiccatiProblem, SchemeParams,
    Termination, DEFAULT_MU_MARGIN,
};
use riccati_core::{Matrix, SymMatrix};

use crate::args::{
    CaseArg, Horizon, MuSetting, RunArgs, RunConfig, ScalarOrderArgs, SchemeArg, ValidateArgs,
    WeightingArg,
};
use crate::{Failure, EXIT_CHECK_FAILED, EXIT_MAX_STEPS, EXIT_NUMERICAL};

pub const DATA_DIR_VAR: &str = "RICCATI_DATA_DIR";
const DEFAULT_OSCILLATOR_ALPHA: f64 = 0.01;
const SCALAR_DT: f64 = 0.01;
const SCALAR_MU: f64 = 0.1;

/// A problem with its default step and shift.
struct Setup {
    problem: RiccatiProblem,
    dt: f64,
    mu: f64,
}

impl From<CaseSpec> for Setup {
    fn from(c: CaseSpec) -> Self {
        Self {
            problem: c.problem,
            dt: c.dt,
            mu: c.mu,
        }
    }
}

fn weighting(w: WeightingArg) -> VehicleWeighting {
    match w {
        WeightingArg::Separations => VehicleWeighting::Separations,
        WeightingArg::Velocities => VehicleWeighting::Velocities,
    }
}

fn weighting_label(w: VehicleWeighting) -> &'static str {
    match w {
        VehicleWeighting::Separations => "separations",
        VehicleWeighting::Velocities => "velocities",
    }
}

fn reject_foreign(case: CaseArg, p: &RunArgs) -> Result<(), Failure> {
    let given = [
        ("alpha", p.alpha.is_some()),
        ("omega2", p.omega2.is_some()),
        ("delta", p.delta.is_some()),
        ("b", p.b.is_some()),
        ("weighting", p.weighting.is_some()),
        ("modes", p.modes.is_some()),
        ("c", p.c.is_some()),
        ("length", p.length.is_some()),
        ("beta", p.beta.is_some()),
        ("k", p.k.is_some()),
        ("a", p.a.is_some()),
        ("q", p.q.is_some()),
        ("d", p.d.is_some()),
    ];
    let allowed: &[&str] = match case {
        CaseArg::SquareRoot => &[],
        CaseArg::Oscillator => &["alpha", "omega2", "delta", "b"],
        CaseArg::Vehicles => &["weighting"],
        CaseArg::Wave => &["modes", "c", "length", "alpha", "beta"],
        CaseArg::Scalar => &["k", "a", "q", "d"],
    };
    match given
        .iter()
        .find(|(name, set)| *set && !allowed.contains(name))
    {
        Some((name, _)) => Err(Failure::usage(format!(
            "--{name} does not apply to case {}",
            case_label(case)
        ))),
        None => Ok(()),
    }
}

fn case_label(case: CaseArg) -> &'static str {
    match case {
        CaseArg::SquareRoot => "square-root",
        CaseArg::Oscillator => "oscillator",
        CaseArg::Vehicles => "vehicles",
        CaseArg::Wave => "wave",
        CaseArg::Scalar => "scalar",
    }
}

fn build_setup(case: CaseArg, p: &RunArgs) -> Result<Setup, Failure> {
    reject_foreign(case, p)?;
    let setup = match case {
        CaseArg::SquareRoot => square_root_case().into(),
        CaseArg::Oscillator => {
            let base = OscillatorParams::new(p.alpha.unwrap_or(DEFAULT_OSCILLATOR_ALPHA));
            oscillator_case(OscillatorParams {
                omega2: p.omega2.unwrap_or(base.omega2),
                delta: p.delta.unwrap_or(base.delta),
                b: p.b.unwrap_or(base.b),
                ..base
            })?
            .into()
        }
        CaseArg::Vehicles => {
            let w = p.weighting.map(weighting).unwrap_or_default();
            vehicles_case(None, w)?.into()
        }
        CaseArg::Wave => {
            let d = WaveParams::default();
            wave_case(&WaveParams {
                modes: p.modes.unwrap_or(d.modes),
                c: p.c.unwrap_or(d.c),
                length: p.length.unwrap_or(d.length),
                alpha: p.alpha.unwrap_or(d.alpha),
                beta: p.beta.unwrap_or(d.beta),
                actuators: None,
            })?
            .into()
        }
        CaseArg::Scalar => {
            let s = ScalarProblem::new(
                p.k.unwrap_or(1.0),
                p.a.unwrap_or(0.0),
                p.q.unwrap_or(1.0),
                p.d.unwrap_or(0.0),
            )?;
            let problem = RiccatiProblem::with_initial(
                Matrix::from_diagonal(&[s.a]),
                SymMatrix::from_diagonal(&[s.k]),
                SymMatrix::from_diagonal(&[s.q]),
                SymMatrix::from_diagonal(&[s.d]),
            )?;
            Setup {
                problem,
                dt: SCALAR_DT,
                mu: SCALAR_MU,
            }
        }
    };
    Ok(setup)
}

fn scheme_params(cfg: &RunConfig, setup: &Setup) -> Result<SchemeParams, Failure> {
    let a = setup.problem.a();
    let mu = match cfg.mu {
        Some(MuSetting::Value(v)) => v,
        Some(MuSetting::Auto) => select_mu(a, DEFAULT_MU_MARGIN)?.mu,
        None => setup.mu,
    };
    let mut params = SchemeParams::new(cfg.dt.unwrap_or(setup.dt), mu)?;
    if !mu_is_admissible(a, mu)? {
        eprintln!("riccati: warning: mu = {mu} does not exceed the largest eigenvalue of A + Aᵗ");
    }
    if let Some(tol) = cfg.tol {
        if !(tol > 0.0) {
            return Err(Failure::usage(format!("--tol must be positive, got {tol}")));
        }
        params = params.with_steady_tol(tol);
    }
    if let Some(n) = cfg.max_steps {
        params = params.with_max_steps(n);
    }
    Ok(params)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure::io(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::io(format!("cannot write to standard output: {e}"))),
    }
}

pub fn run(cfg: RunConfig) -> Result<u8, Failure> {
    let setup = build_setup(cfg.case, &cfg.params)?;
    let explicit = match cfg.scheme {
        SchemeArg::Homographic => None,
        SchemeArg::Euler => Some(ExplicitScheme::ForwardEuler),
        SchemeArg::Rk2 => Some(ExplicitScheme::Rk2Midpoint),
    };
    let out = cfg.output.as_deref();
    match (explicit, cfg.horizon) {
        (None, Horizon::Until(t_end)) => {
            let params = scheme_params(&cfg, &setup)?;
            write_output(
                out,
                &trajectory_csv(&integrate(&setup.problem, &params, t_end)?),
            )?;
            Ok(0)
        }
        (None, Horizon::Steady) => {
            let params = scheme_params(&cfg, &setup)?;
            let st = solve_steady(&setup.problem, &params)?;
            write_output(out, &trajectory_csv(&st.trajectory))?;
            if st.converged {
                eprintln!("riccati: converged after {} steps", st.steps());
                Ok(0)
            } else {
                eprintln!(
                    "riccati: steady state not reached after {} steps (last relative change {:e})",
                    st.steps(),
                    st.last_change
                );
                Ok(EXIT_MAX_STEPS)
            }
        }
        (Some(_), Horizon::Steady) => Err(Failure::usage(
            "--steady requires the homographic scheme; give --t-end instead",
        )),
        (Some(scheme), Horizon::Until(t_end)) => {
            let dt = cfg.dt.unwrap_or(setup.dt);
            let tr = integrate_explicit(scheme, &setup.problem, dt, t_end)?;
            write_output(out, &trajectory_csv(&tr))?;
            match tr.termination {
                Termination::Diverged { step } => {
                    eprintln!("riccati: {} diverged at step {step}", scheme.name());
                    Ok(EXIT_NUMERICAL)
                }
                _ => Ok(0),
            }
        }
    }
}

pub fn compare(cfg: RunConfig) -> Result<u8, Failure> {
    if cfg.params.scheme.is_some() {
        return Err(Failure::usage(
            "compare always runs all three schemes; drop --scheme",
        ));
    }
    let Horizon::Until(t_end) = cfg.horizon else {
        return Err(Failure::usage("compare needs a finite --t-end"));
    };
    let setup = build_setup(cfg.case, &cfg.params)?;
    let params = scheme_params(&cfg, &setup)?;
    let homographic = integrate(&setup.problem, &params, t_end)?;
    let euler = integrate_explicit(
        ExplicitScheme::ForwardEuler,
        &setup.problem,
        params.dt,
        t_end,
    )?;
    let rk2 = integrate_explicit(
        ExplicitScheme::Rk2Midpoint,
        &setup.problem,
        params.dt,
        t_end,
    )?;
    let csv = comparison_csv(&[
        ("homographic", &homographic),
        (ExplicitScheme::ForwardEuler.name(), &euler),
        (ExplicitScheme::Rk2Midpoint.name(), &rk2),
    ]);
    write_output(cfg.output.as_deref(), &csv)?;
    Ok(0)
}

fn default_data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn load_reference() -> Result<(Figure13Reference, String), Failure> {
    if let Some(dir) = std::env::var_os(DATA_DIR_VAR) {
        let dir = PathBuf::from(dir);
        let r = Figure13Reference::load(&dir)?;
        return Ok((r, dir.join(FIGURE13_FILE).display().to_string()));
    }
    let dir = default_data_dir();
    if dir.join(FIGURE13_FILE).is_file() {
        let r = Figure13Reference::load(&dir)?;
        return Ok((r, dir.join(FIGURE13_FILE).display().to_string()));
    }
    Ok((Figure13Reference::embedded(), "built-in copy".into()))
}

pub fn validate_figure13(args: &ValidateArgs) -> Result<u8, Failure> {
    let (reference, source) = load_reference()?;
    let a = vehicle_candidate_a();
    println!("reference: {source}");
    for w in [VehicleWeighting::Separations, VehicleWeighting::Velocities] {
        let v = check_reference(&reference, &a, w)?;
        println!(
            "reference ARE residual ({}): {}",
            weighting_label(w),
            format_g17(v.residual)
        );
    }
    let params = SchemeParams::new(args.dt, args.mu)?.with_max_steps(args.max_steps);
    let report = figure13_report(&reference, &a, weighting(args.weighting), &params)?;
    let accepted = report.validation.accepted;
    println!(
        "candidate A accepted ({}): {}",
        weighting_label(report.weighting),
        if accepted { "yes" } else { "no" }
    );
    if report.converged {
        println!("steady state: converged after {} steps", report.steps);
    } else {
        println!("steady state: not converged after {} steps", report.steps);
    }
    println!(
        "max deviation from reference: {}",
        format_g17(report.max_deviation)
    );
    println!("limit ARE residual: {}", format_g17(report.limit_residual));
    let ok = accepted && report.max_deviation <= FIGURE13_MATCH_TOL;
    println!(
        "result: {}",
        if ok { "reproduced" } else { "not reproduced" }
    );
    Ok(if ok { 0 } else { EXIT_CHECK_FAILED })
}

pub fn scalar_order(args: &ScalarOrderArgs) -> Result<u8, Failure> {
    if args.dt_list.len() < 2 {
        return Err(Failure::usage("--dt-list needs at least two time steps"));
    }
    let p = ScalarProblem::new(args.k, args.a, args.q, args.d)?;
    let study = order_study(
        &p,
        &args.dt_list,
        args.t_end,
        args.d_delta.unwrap_or(args.d),
    )?;
    println!("dt,max_error");
    for (dt, err) in &study.errors {
        println!("{},{}", format_g17(*dt), format_g17(*err));
    }
    println!("slope: {:.4}", study.slope);
    Ok(0)
}
