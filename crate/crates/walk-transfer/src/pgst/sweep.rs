//! Fidelity sweeps over a time window with local refinement.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::SpectralDecomposition;
use crate::states::PureState;

/// Parameters for a fidelity sweep.
#[derive(Debug, Clone)]
pub struct SweepParams {
    /// Right end of the time window `[0, t_max]`.
    pub t_max: f64,
    /// Number of grid samples; `0` picks a step well below the Nyquist limit.
    pub samples: usize,
    /// Grid maxima above this value are refined by golden-section search.
    pub refine_threshold: f64,
    /// Bracket width at which refinement stops.
    pub time_resolution: f64,
}

impl Default for SweepParams {
    fn default() -> Self {
        Self { t_max: 100.0, samples: 0, refine_threshold: 0.5, time_resolution: 1e-10 }
    }
}

/// Result of a fidelity sweep: the sampled trace and the refined best point.
#[derive(Debug, Clone)]
pub struct FidelityTrace {
    pub times: Vec<f64>,
    pub fidelities: Vec<f64>,
    pub best_time: f64,
    pub best_fidelity: f64,
    pub grid_step: f64,
}

/// Spectral form of the fidelity: coefficients a_j = <v, E_j u> so that
/// f(t) = |sum_j a_j exp(i t lambda_j)|.
struct FidelityModel {
    lambdas: Vec<f64>,
    coeffs: Vec<f64>,
}

impl FidelityModel {
    fn new(dec: &SpectralDecomposition, u: &PureState, v: &PureState) -> Result<Self> {
        if u.n() != dec.dim() || v.n() != dec.dim() {
            return Err(Error::SizeMismatch(u.n(), dec.dim()));
        }
        let coeffs = dec
            .projectors()
            .iter()
            .map(|e| v.vector().dot(&(e * u.vector())))
            .collect();
        Ok(Self { lambdas: dec.eigenvalues().to_vec(), coeffs })
    }

    fn eval(&self, t: f64) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&l, &a) in self.lambdas.iter().zip(&self.coeffs) {
            acc += Complex64::from_polar(a, t * l);
        }
        acc.norm()
    }
}

fn resolve_grid(dec: &SpectralDecomposition, params: &SweepParams) -> Result<(usize, f64)> {
    if !(params.t_max > 0.0) || !params.t_max.is_finite() {
        return Err(Error::Domain(format!("sweep window must be positive, got {}", params.t_max)));
    }
    let scale = dec.scale();
    let limit = if scale > 0.0 { std::f64::consts::FRAC_PI_2 / scale } else { f64::INFINITY };
    let samples = if params.samples == 0 {
        // Aim for a quarter of the Nyquist step so grid maxima bracket true peaks.
        let target = (limit / 4.0).min(params.t_max / 256.0);
        ((params.t_max / target).ceil() as usize + 1).min(4_000_000)
    } else {
        params.samples
    };
    if samples < 2 {
        return Err(Error::Domain("sweep needs at least two samples".into()));
    }
    let step = params.t_max / (samples - 1) as f64;
    if step >= limit {
        return Err(Error::GridTooCoarse { step, limit });
    }
    Ok((samples, step))
}

fn golden_section_max(model: &FidelityModel, mut a: f64, mut b: f64, resolution: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = model.eval(c);
    let mut fd = model.eval(d);
    while b - a > resolution {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = model.eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = model.eval(d);
        }
    }
    let t = 0.5 * (a + b);
    (t, model.eval(t))
}

fn finish_sweep(
    model: &FidelityModel,
    times: Vec<f64>,
    fidelities: Vec<f64>,
    step: f64,
    params: &SweepParams,
) -> FidelityTrace {
    let m = fidelities.len();
    let mut best_time = 0.0;
    let mut best_fidelity = f64::NEG_INFINITY;
    for (i, &f) in fidelities.iter().enumerate() {
        if f > best_fidelity {
            best_fidelity = f;
            best_time = times[i];
        }
    }
    for i in 0..m {
        let f = fidelities[i];
        if f <= params.refine_threshold {
            continue;
        }
        let left_ok = i == 0 || fidelities[i - 1] <= f;
        let right_ok = i == m - 1 || fidelities[i + 1] <= f;
        if !(left_ok && right_ok) {
            continue;
        }
        let a = if i == 0 { times[0] } else { times[i - 1] };
        let b = if i == m - 1 { times[m - 1] } else { times[i + 1] };
        let (t, f) = golden_section_max(model, a, b, params.time_resolution);
        if f > best_fidelity {
            best_fidelity = f;
            best_time = t;
        }
    }
    FidelityTrace { times, fidelities, best_time, best_fidelity, grid_step: step }
}

/// Sweep `|<v, U(t) u>|` over `[0, t_max]` on a uniform grid and refine the
/// local maxima; sequential grid evaluation.
pub fn sweep_max_fidelity_seq(
    dec: &SpectralDecomposition,
    u: &PureState,
    v: &PureState,
    params: &SweepParams,
) -> Result<FidelityTrace> {
    let model = FidelityModel::new(dec, u, v)?;
    let (samples, step) = resolve_grid(dec, params)?;
    let times: Vec<f64> = (0..samples).map(|i| i as f64 * step).collect();
    let fidelities: Vec<f64> = times.iter().map(|&t| model.eval(t)).collect();
    Ok(finish_sweep(&model, times, fidelities, step, params))
}

/// Sweep with the grid evaluated in parallel.
#[cfg(feature = "parallel")]
pub fn sweep_max_fidelity_par(
    dec: &SpectralDecomposition,
    u: &PureState,
    v: &PureState,
    params: &SweepParams,
) -> Result<FidelityTrace> {
    use rayon::prelude::*;
    let model = FidelityModel::new(dec, u, v)?;
    let (samples, step) = resolve_grid(dec, params)?;
    let times: Vec<f64> = (0..samples).map(|i| i as f64 * step).collect();
    let fidelities: Vec<f64> = times.par_iter().map(|&t| model.eval(t)).collect();
    Ok(finish_sweep(&model, times, fidelities, step, params))
}

/// Sweep `|<v, U(t) u>|` over `[0, t_max]`; uses the parallel grid when the
/// `parallel` feature is enabled.
pub fn sweep_max_fidelity(
    dec: &SpectralDecomposition,
    u: &PureState,
    v: &PureState,
    params: &SweepParams,
) -> Result<FidelityTrace> {
    #[cfg(feature = "parallel")]
    {
        sweep_max_fidelity_par(dec, u, v, params)
    }
    #[cfg(not(feature = "parallel"))]
    {
        sweep_max_fidelity_seq(dec, u, v, params)
    }
}
