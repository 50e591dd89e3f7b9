//! Deterministic CSV emission of trajectories.

use std::fmt::Write;

use crate::scheme::{Termination, Trajectory};

/// C `printf("%.17g")` formatting.
pub fn format_g17(v: f64) -> String {
    const P: i32 = 17;
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{:.*e}", (P - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..P).contains(&exp) {
        let fixed = format!("{:.*}", (P - 1 - exp) as usize, v);
        strip_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mantissa), exp.abs())
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn trajectory_header(n: usize) -> String {
    let mut h = String::from("t");
    for k in 1..=n {
        write!(h, ",lambda_{k}").unwrap();
    }
    h.push_str(",are_residual,min_eig");
    h
}

/// `t,lambda_1,…,lambda_n,are_residual,min_eig`, one row per record.
pub fn trajectory_csv(tr: &Trajectory) -> String {
    let mut out = trajectory_header(tr.dim());
    out.push('\n');
    for r in &tr.records {
        out.push_str(&format_g17(r.t));
        for l in &r.eigenvalues {
            out.push(',');
            out.push_str(&format_g17(*l));
        }
        writeln!(
            out,
            ",{},{}",
            format_g17(r.are_residual),
            format_g17(r.min_eig)
        )
        .unwrap();
    }
    out
}

/// Side-by-side `min_eig` and `are_residual` per scheme. A run that ended
/// early leaves empty cells. Two trailing rows follow: `status` records how
/// each run terminated and `first_indefinite` the first step whose iterate
/// has `min_eig < −INDEFINITE_TOL·(1 + max|λ|)`, or `-` if none has.
pub fn comparison_csv(runs: &[(&str, &Trajectory)]) -> String {
    let mut out = String::from("t");
    for (name, _) in runs {
        write!(out, ",{name}_min_eig,{name}_are_residual").unwrap();
    }
    out.push('\n');
    let rows = runs.iter().map(|(_, t)| t.records.len()).max().unwrap_or(0);
    let dt = runs.first().map(|(_, t)| t.dt).unwrap_or(0.0);
    for j in 0..rows {
        let t = runs
            .iter()
            .find_map(|(_, tr)| tr.records.get(j).map(|r| r.t))
            .unwrap_or(j as f64 * dt);
        out.push_str(&format_g17(t));
        for (_, tr) in runs {
            match tr.records.get(j) {
                Some(r) => write!(
                    out,
                    ",{},{}",
                    format_g17(r.min_eig),
                    format_g17(r.are_residual)
                )
                .unwrap(),
                None => out.push_str(",,"),
            }
        }
        out.push('\n');
    }
    out.push_str("status");
    for (_, tr) in runs {
        let s = match tr.termination {
            Termination::ReachedEnd => "completed".to_string(),
            Termination::Converged => "converged".to_string(),
            Termination::MaxSteps => "max-steps".to_string(),
            Termination::Diverged { step } => format!("diverged@{step}"),
        };
        write!(out, ",{s},").unwrap();
    }
    out.push_str("\nfirst_indefinite");
    for (_, tr) in runs {
        match first_indefinite(tr) {
            Some(j) => write!(out, ",{j},").unwrap(),
            None => out.push_str(",-,"),
        }
    }
    out.push('\n');
    out
}

pub const INDEFINITE_TOL: f64 = 1e-9;

/// First record index whose iterate is indefinite beyond round-off.
pub fn first_indefinite(tr: &Trajectory) -> Option<usize> {
    tr.records.iter().position(|r| {
        let scale = r.eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
        r.min_eig < -INDEFINITE_TOL * (1.0 + scale)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn g17_examples() {
        assert_eq!(format_g17(0.0), "0");
        assert_eq!(format_g17(1.0), "1");
        assert_eq!(format_g17(10.0), "10");
        assert_eq!(format_g17(0.1), "0.10000000000000001");
        assert_eq!(format_g17(-2.5), "-2.5");
        assert_eq!(format_g17(1e-5), "1.0000000000000001e-05");
        assert_eq!(format_g17(1e-4), "0.0001");
        assert_eq!(format_g17(1e17), "1e+17");
        assert_eq!(format_g17(123456789012345680.0), "1.2345678901234568e+17");
        assert_eq!(format_g17(1e16), "10000000000000000");
        assert_eq!(format_g17(f64::NAN), "nan");
        assert_eq!(format_g17(f64::NEG_INFINITY), "-inf");
        assert_eq!(format_g17(1e300), "1.0000000000000001e+300");
    }

    #[test]
    fn header() {
        assert_eq!(
            trajectory_header(2),
            "t,lambda_1,lambda_2,are_residual,min_eig"
        );
    }

    #[test]
    fn comparison_flags_early_end_and_indefinite_iterates() {
        use crate::baselines::{integrate_explicit, ExplicitScheme};
        use crate::cases::square_root_case;
        use crate::scheme::{integrate, SchemeParams};

        let case = square_root_case();
        let params = SchemeParams::new(100.0, 0.1).unwrap();
        let h = integrate(&case.problem, &params, 1000.0).unwrap();
        let e =
            integrate_explicit(ExplicitScheme::ForwardEuler, &case.problem, 100.0, 1000.0).unwrap();
        let csv = comparison_csv(&[("homographic", &h), ("euler", &e)]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 1 + 11 + 2);
        assert!(lines[5].ends_with(",,"));
        assert_eq!(lines[12], "status,completed,,diverged@3,");
        assert_eq!(lines[13], "first_indefinite,-,,2,");
    }

    proptest! {
        #[test]
        fn g17_round_trips(v in prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL) {
            let s = format_g17(v);
            prop_assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }
}
