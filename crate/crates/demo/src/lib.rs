//! WebAssembly bindings behind `www/index.html`.

use wasm_bindgen::prelude::*;

use seqdensity::dist::{convolve_edf, edf, DEFAULT_CONVOLUTION_CAP};
use seqdensity::polyadic;
use seqdensity::seqgen::vdc_window;
use seqdensity::BaseChain;

fn vdc(base: u32, n: u32) -> Result<seqdensity::SequenceWindow, String> {
    let chain = BaseChain::geometric(base as u64, 2).map_err(|e| e.to_string())?;
    vdc_window(&chain, n as usize).map_err(|e| e.to_string())
}

/// Points `(gamma_a(n), gamma_b(n))` for `n = 1..=count`, flattened as `x0, y0, x1, y1, ...`.
#[wasm_bindgen]
pub fn halton_points(base_a: u32, base_b: u32, count: u32) -> Result<Vec<f64>, String> {
    let xs = vdc(base_a, count)?;
    let ys = vdc(base_b, count)?;
    Ok(xs.values().iter().zip(ys.values()).flat_map(|(&x, &y)| [x, y]).collect())
}

/// Exact distribution function of the sum of two independent uniforms.
pub fn uniform_sum_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x <= 1.0 {
        x * x / 2.0
    } else if x <= 2.0 {
        1.0 - (2.0 - x) * (2.0 - x) / 2.0
    } else {
        1.0
    }
}

/// Distribution function of `gamma_a + gamma_b` from the convolution of the two
/// window EDFs, sampled at `samples` points of `[0, 2]`. Rows are flattened as
/// `x, convolved, exact`.
#[wasm_bindgen]
pub fn vdc_sum_cdf(base_a: u32, base_b: u32, count: u32, samples: u32) -> Result<Vec<f64>, String> {
    if samples < 2 {
        return Err("need at least two sample points".into());
    }
    let f = edf(&vdc(base_a, count)?).coarsen(1000);
    let g = edf(&vdc(base_b, count)?).coarsen(1000);
    let h = convolve_edf(&f, &g, DEFAULT_CONVOLUTION_CAP).map_err(|e| e.to_string())?;
    Ok((0..samples)
        .flat_map(|i| {
            let x = 2.0 * i as f64 / (samples - 1) as f64;
            [x, h.eval(x), uniform_sum_cdf(x)]
        })
        .collect())
}

/// Exact polyadic distance as `"p/q = decimal"`.
#[wasm_bindgen]
pub fn polyadic_distance(a: i32, b: i32) -> String {
    let d = polyadic::polyadic_distance(a as i64, b as i64);
    format!("{d} = {}", d.to_f64())
}
