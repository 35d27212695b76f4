use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::array::Parameterized;

pub const GRAD_CHECK_STEP: f64 = 1e-5;
pub const GRAD_CHECK_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct GradCheckReport {
    pub max_relative_error: f64,
    /// Parameter name and flat index of the worst entry.
    pub worst: Option<(String, usize)>,
    pub checked: usize,
}

impl GradCheckReport {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.max_relative_error < tolerance
    }
}

pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / (analytic.abs() + numeric.abs()).max(1e-6)
}

/// Compares analytic gradients with central differences on every
/// parameter entry. `loss` must be deterministic; when `backward` is true
/// it also accumulates gradients into the (already zeroed) parameters.
pub fn grad_check<M, F>(model: &mut M, loss: F) -> GradCheckReport
where
    M: Parameterized,
    F: FnMut(&mut M, bool) -> f64,
{
    check_entries(model, loss, |len| (0..len).collect())
}

/// Like [`grad_check`], but probes at most `per_param` entries of each
/// parameter array, drawn without replacement from a seeded stream.
pub fn grad_check_sampled<M, F>(model: &mut M, per_param: usize, seed: u64, loss: F) -> GradCheckReport
where
    M: Parameterized,
    F: FnMut(&mut M, bool) -> f64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    check_entries(model, loss, |len| {
        let mut v = sample(&mut rng, len, per_param.min(len)).into_vec();
        v.sort_unstable();
        v
    })
}

fn check_entries<M, F, S>(model: &mut M, mut loss: F, mut select: S) -> GradCheckReport
where
    M: Parameterized,
    F: FnMut(&mut M, bool) -> f64,
    S: FnMut(usize) -> Vec<usize>,
{
    model.zero_grad();
    loss(model, true);
    let analytic: Vec<Vec<f64>> = model.params().iter().map(|(_, p)| p.grad.iter().copied().collect()).collect();
    let names: Vec<String> = model.params().into_iter().map(|(n, _)| n).collect();
    let mut report = GradCheckReport {
        max_relative_error: 0.0,
        worst: None,
        checked: 0,
    };
    for (pi, name) in names.iter().enumerate() {
        for k in select(analytic[pi].len()) {
            let nudge = |m: &mut M, delta: f64| {
                let mut params = m.params_mut();
                let v = params[pi].1.value.as_slice_mut().expect("standard layout");
                v[k] += delta;
            };
            nudge(model, GRAD_CHECK_STEP);
            let up = loss(model, false);
            nudge(model, -2.0 * GRAD_CHECK_STEP);
            let down = loss(model, false);
            nudge(model, GRAD_CHECK_STEP);
            let numeric = (up - down) / (2.0 * GRAD_CHECK_STEP);
            let err = relative_error(analytic[pi][k], numeric);
            report.checked += 1;
            if err > report.max_relative_error {
                report.max_relative_error = err;
                report.worst = Some((name.clone(), k));
            }
        }
    }
    report
}
