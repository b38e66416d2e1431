//! Browser bindings for three walk operations. Every export returns a JSON
//! string; failures come back as `{"error": "..."}`.

use std::f64::consts::FRAC_1_SQRT_2;

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use qwalk::canonical::general_to_type;
use qwalk::evolve::{trajectory, verify_equivalence_distributions, State};
use qwalk::linalg::{ONE, ZERO};
use qwalk::szegedy::{eta_criterion, solve, verify_certificate};
use qwalk::zoo::{self, HalfCoin, RandomForm};
use qwalk::{Angle, Error, Extension, TypedClass, WalkSpec};

pub const MAX_STEPS: u32 = 400;

type Out = Result<Value, String>;

fn finish(out: Out) -> String {
    match out {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

/// Models the page offers, one real parameter each.
///
/// `hadamard` ignores it, `two-coin` uses it as the phase `μ` of the left
/// coin and `kitagawa-b` as the slope `η` of the phases `ωₙ = ηn`.
pub fn build(model: &str, param: f64, half_width: i64) -> Result<WalkSpec, String> {
    let window = (-half_width, half_width);
    let w = match model {
        "hadamard" => Ok(zoo::hadamard_on(window)),
        "two-coin" => {
            let plus = HalfCoin::unitary(FRAC_1_SQRT_2, Angle::ZERO, Angle::ZERO, Angle::ZERO);
            let minus = HalfCoin::unitary(FRAC_1_SQRT_2, Angle::ZERO, Angle::ZERO, Angle::rad(param));
            zoo::two_coin(plus, minus, window)
        }
        "kitagawa-b" => {
            let omega: Vec<Angle> = (-half_width..=half_width).map(|n| Angle::rad(param * n as f64)).collect();
            zoo::kitagawa_b(&omega, -half_width)
        }
        other => return Err(format!("unknown model {other}")),
    };
    w.map_err(|e| e.to_string())
}

fn origin() -> Result<State, String> {
    // symmetric start so the Hadamard spread is balanced
    let h = FRAC_1_SQRT_2;
    State::localized(0, ONE * h, qwalk::linalg::C64::new(0.0, h)).map_err(|e| e.to_string())
}

/// Probability of every site in `[-steps-1, steps+1]` at every time step.
pub fn simulate_json(model: &str, param: f64, steps: u32) -> Out {
    let steps = steps.clamp(1, MAX_STEPS);
    let half = steps as i64 + 1;
    let w = build(model, param, half)?;
    let frames = trajectory(&w, &origin()?, steps as usize).map_err(|e| e.to_string())?;
    let rows: Vec<Vec<f64>> = frames
        .iter()
        .map(|s| (-half..=half).map(|n| s.get(n).norm_squared()).collect())
        .collect();
    Ok(json!({ "lo": -half, "hi": half, "frames": rows }))
}

/// Verdict, `λ`, `η` and the certificate residual, angles in radians.
pub fn szegedy_json(model: &str, param: f64) -> Out {
    let w = build(model, param, 6)?;
    let cert = solve(&w).map_err(|e| e.to_string())?;
    let eta = match eta_criterion(&w) {
        Ok(e) => e,
        Err(Error::EmptyLambda) => Some(Angle::ZERO),
        Err(e) => return Err(e.to_string()),
    };
    Ok(match cert {
        Some(c) => {
            let rep = verify_certificate(&w, &c);
            json!({
                "szegedy": true,
                "lambda": c.lambda.radians(),
                "eta": eta.map(|e| e.radians()),
                "verified": rep.passed,
                "residual": rep.max_residual(),
            })
        }
        None => json!({ "szegedy": false, "lambda": null, "eta": null }),
    })
}

/// Random general walk against its canonical form of class `class`: the
/// final distributions of both and the worst deviation over all steps.
pub fn equivalence_json(seed: u32, class: u8, steps: u32) -> Out {
    let steps = steps.clamp(1, MAX_STEPS) as usize;
    let k = TypedClass::from_index(class).ok_or_else(|| format!("no class C{class}"))?;
    let w = zoo::random_walk(seed as u64, (-3, 3), RandomForm::General, Extension::Periodic(7)).map_err(|e| e.to_string())?;
    let (typed, family) = general_to_type(&w, k).map_err(|e| e.to_string())?;
    let psi = State::localized(0, ONE, ZERO).map_err(|e| e.to_string())?;
    let deviation = verify_equivalence_distributions(&w, &family, &psi, steps).map_err(|e| e.to_string())?;
    let moved = psi.transformed(&family, w.extension()).map_err(|e| e.to_string())?;
    let last = |w: &WalkSpec, s: &State| -> Result<Vec<f64>, String> {
        let t = trajectory(w, s, steps).map_err(|e| e.to_string())?;
        let end = t.last().unwrap();
        Ok((-(steps as i64)..=steps as i64).map(|n| end.get(n).norm_squared()).collect())
    };
    Ok(json!({
        "lo": -(steps as i64),
        "original": last(&w, &psi)?,
        "canonical": last(&typed, &moved)?,
        "deviation": deviation,
    }))
}

#[wasm_bindgen]
pub fn simulate(model: &str, param: f64, steps: u32) -> String {
    finish(simulate_json(model, param, steps))
}

#[wasm_bindgen]
pub fn szegedy(model: &str, param: f64) -> String {
    finish(szegedy_json(model, param))
}

#[wasm_bindgen]
pub fn equivalence(seed: u32, class: u8, steps: u32) -> String {
    finish(equivalence_json(seed, class, steps))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn hadamard_frames_are_normalized() {
        let v = parse(simulate("hadamard", 0.0, 30));
        let frames = v["frames"].as_array().unwrap();
        assert_eq!(frames.len(), 31);
        for f in frames {
            let total: f64 = f.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hadamard_second_step() {
        let v = parse(simulate("hadamard", 0.0, 2));
        let row: Vec<f64> = v["frames"][2].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
        // sites -3..=3
        for (p, q) in row.iter().zip([0.0, 0.25, 0.0, 0.5, 0.0, 0.25, 0.0]) {
            assert!((p - q).abs() < 1e-12);
        }
    }

    #[test]
    fn two_coin_verdict_tracks_phase() {
        assert_eq!(parse(szegedy("two-coin", 0.0))["szegedy"], true);
        assert_eq!(parse(szegedy("two-coin", std::f64::consts::PI))["szegedy"], true);
        assert_eq!(parse(szegedy("two-coin", 1.0))["szegedy"], false);
    }

    #[test]
    fn kitagawa_slope_comes_back_as_eta() {
        let v = parse(szegedy("kitagawa-b", 0.7));
        assert_eq!(v["szegedy"], true);
        assert_eq!(v["verified"], true);
        assert!((v["eta"].as_f64().unwrap() - 0.7).abs() < 1e-9);
    }

    #[test]
    fn equivalence_deviation_is_tiny() {
        for k in 1..=4 {
            let v = parse(equivalence(5, k, 25));
            assert!(v["deviation"].as_f64().unwrap() < 1e-10);
            assert_eq!(v["original"].as_array().unwrap().len(), 51);
        }
    }

    #[test]
    fn errors_are_reported_as_json() {
        assert!(parse(simulate("nope", 0.0, 3))["error"].is_string());
        assert!(parse(equivalence(1, 9, 3))["error"].is_string());
    }
}
