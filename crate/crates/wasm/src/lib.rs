use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use sinvar::model::{potential_v, potential_v_tilde, EnergyPoint, ExtensionChoice, ModelParams};
use sinvar::spectrum::{build_spectrum, ScanConfig, SpectrumResult};
use sinvar::wavefunction::normalized_wavefunction;

fn extension(name: &str) -> Result<ExtensionChoice, String> {
    name.parse().map_err(|e: sinvar::Error| e.to_string())
}

fn spectrum_for(eta: f64, ext: ExtensionChoice) -> Result<(ModelParams, SpectrumResult), String> {
    let p = ModelParams::from_eta(eta).map_err(|e| e.to_string())?;
    let s = build_spectrum(eta, ext, &ScanConfig::default_for(eta), &p).map_err(|e| e.to_string())?;
    Ok((p, s))
}

/// V and its partner on `n` points of [x_min, x_max] (x_min > 0).
pub fn potential_json(eta: f64, x_min: f64, x_max: f64, n: usize) -> Result<String, String> {
    let p = ModelParams::from_eta(eta).map_err(|e| e.to_string())?;
    if !(x_min > 0.0 && x_max > x_min && n >= 2) {
        return Err(format!("need 0 < x_min < x_max and n >= 2 (got {x_min}, {x_max}, {n})"));
    }
    let h = (x_max - x_min) / (n - 1) as f64;
    let mut x = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    let mut vt = Vec::with_capacity(n);
    for i in 0..n {
        let xi = x_min + i as f64 * h;
        x.push(xi);
        v.push(potential_v(xi, &p).map_err(|e| e.to_string())?);
        vt.push(potential_v_tilde(xi, &p).map_err(|e| e.to_string())?);
    }
    Ok(json!({ "a": p.a, "eta": eta, "x": x, "v": v, "v_tilde": vt }).to_string())
}

/// The lowest `n_levels` levels of the extension named `ext` ("minus" or "plus").
pub fn spectrum_json(eta: f64, ext: &str, n_levels: usize) -> Result<String, String> {
    let ext = extension(ext)?;
    let (p, s) = spectrum_for(eta, ext)?;
    let levels: Vec<Value> =
        s.levels.iter().take(n_levels).map(|l| json!({ "n": l.n, "y": l.y, "e": l.e, "nodes": l.nodes })).collect();
    Ok(json!({ "a": p.a, "eta": eta, "extension": ext.as_str(), "levels": levels, "flagged": s.flagged }).to_string())
}

/// Normalized Ψ of level `level` on `n_points` samples, mirrored by parity.
pub fn wavefunction_json(eta: f64, ext: &str, level: usize, n_points: usize) -> Result<String, String> {
    let ext = extension(ext)?;
    let (p, s) = spectrum_for(eta, ext)?;
    let l = s.level(level).map_err(|e| e.to_string())?;
    let ep = EnergyPoint::from_y(l.y, &p);
    let t = normalized_wavefunction(&ep, ext, &p, n_points, None, true).map_err(|e| e.to_string())?;
    Ok(json!({
        "n": l.n,
        "y": l.y,
        "e": l.e,
        "nodes": l.nodes,
        "parity": t.parity,
        "x": t.x,
        "psi": t.psi,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn potential(eta: f64, x_min: f64, x_max: f64, n: usize) -> Result<String, JsValue> {
    potential_json(eta, x_min, x_max, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn spectrum(eta: f64, ext: &str, n_levels: usize) -> Result<String, JsValue> {
    spectrum_json(eta, ext, n_levels).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn wavefunction(eta: f64, ext: &str, level: usize, n_points: usize) -> Result<String, JsValue> {
    wavefunction_json(eta, ext, level, n_points).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn potential_table() {
        let v = parse(&potential_json(-2.0, 0.5, 4.0, 8).unwrap());
        assert_eq!(v["x"].as_array().unwrap().len(), 8);
        assert_eq!(v["a"].as_f64(), Some(2.0));
        assert!(potential_json(-2.0, 0.0, 4.0, 8).is_err());
        assert!(potential_json(2.0, 0.5, 4.0, 8).is_err());
    }

    #[test]
    fn spectrum_levels() {
        let v = parse(&spectrum_json(-2.0, "minus", 4).unwrap());
        let levels = v["levels"].as_array().unwrap();
        assert_eq!(levels.len(), 4);
        assert!((levels[0]["y"].as_f64().unwrap() + 2.0).abs() < 1e-8);
        assert_eq!(levels[3]["nodes"].as_u64(), Some(3));
        assert!(spectrum_json(-2.0, "sideways", 4).is_err());
    }

    #[test]
    fn wavefunction_table() {
        let v = parse(&wavefunction_json(-2.0, "plus", 2, 401).unwrap());
        assert_eq!(v["parity"], "Even");
        let x = v["x"].as_array().unwrap();
        assert_eq!(x.len(), v["psi"].as_array().unwrap().len());
        assert!(x[0].as_f64().unwrap() < 0.0);
        assert!(wavefunction_json(-2.0, "minus", 999, 401).is_err());
    }
}
