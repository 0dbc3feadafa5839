//! Minimal dense feed-forward network over a flat parameter vector.
//!
//! Keeping every weight in one `Vec<f64>` makes the optimizer trivial and
//! lets tests perturb single parameters for finite-difference checks. A
//! network is described by its layer sizes `[n_0, .., n_L]`; hidden layers
//! use `tanh`, the last layer is linear. Parameters are laid out layer by
//! layer: the `n_k x n_{k-1}` weight matrix row-major, then `n_k` biases.

use rand::Rng;

/// Total parameter count for the given layer sizes.
pub fn param_count(sizes: &[usize]) -> usize {
    sizes
        .windows(2)
        .map(|w| w[1] * w[0] + w[1])
        .sum()
}

/// Flat offset of layer `k`'s weights (`k` in `1..sizes.len()`).
fn layer_offset(sizes: &[usize], k: usize) -> usize {
    sizes[..k]
        .windows(2)
        .map(|w| w[1] * w[0] + w[1])
        .sum()
}

/// Xavier-uniform weights, zero biases.
pub fn init_params<R: Rng>(sizes: &[usize], rng: &mut R) -> Vec<f64> {
    let mut params = vec![0.0; param_count(sizes)];
    for k in 1..sizes.len() {
        let (n_in, n_out) = (sizes[k - 1], sizes[k]);
        let limit = (6.0 / (n_in + n_out) as f64).sqrt();
        let off = layer_offset(sizes, k);
        for w in params[off..off + n_out * n_in].iter_mut() {
            *w = rng.random_range(-limit..limit);
        }
    }
    params
}

/// Runs the network, discarding intermediates.
pub fn forward(sizes: &[usize], params: &[f64], input: &[f64]) -> Vec<f64> {
    forward_cached(sizes, params, input)
        .pop()
        .expect("network has at least one layer")
}

/// Runs the network and returns every activation vector, input first and
/// linear output last — exactly what [`backward`] needs.
pub fn forward_cached(sizes: &[usize], params: &[f64], input: &[f64]) -> Vec<Vec<f64>> {
    debug_assert_eq!(params.len(), param_count(sizes));
    debug_assert_eq!(input.len(), sizes[0]);
    let mut acts = Vec::with_capacity(sizes.len());
    acts.push(input.to_vec());
    for k in 1..sizes.len() {
        let (n_in, n_out) = (sizes[k - 1], sizes[k]);
        let off = layer_offset(sizes, k);
        let prev = &acts[k - 1];
        let mut z = vec![0.0; n_out];
        for (i, zi) in z.iter_mut().enumerate() {
            let mut s = params[off + n_out * n_in + i];
            let row = &params[off + i * n_in..off + (i + 1) * n_in];
            for (w, a) in row.iter().zip(prev) {
                s += w * a;
            }
            *zi = s;
        }
        if k < sizes.len() - 1 {
            for zi in z.iter_mut() {
                *zi = zi.tanh();
            }
        }
        acts.push(z);
    }
    acts
}

/// Backpropagates `grad_output` (the loss gradient at the linear output)
/// through the cached activations, accumulating parameter gradients into
/// `grad` (same layout and length as `params`).
pub fn backward(
    sizes: &[usize],
    params: &[f64],
    acts: &[Vec<f64>],
    grad_output: &[f64],
    grad: &mut [f64],
) {
    debug_assert_eq!(grad.len(), params.len());
    let mut delta = grad_output.to_vec();
    for k in (1..sizes.len()).rev() {
        let (n_in, n_out) = (sizes[k - 1], sizes[k]);
        let off = layer_offset(sizes, k);
        let prev = &acts[k - 1];
        for i in 0..n_out {
            let row = &mut grad[off + i * n_in..off + (i + 1) * n_in];
            for (g, a) in row.iter_mut().zip(prev) {
                *g += delta[i] * a;
            }
        }
        for i in 0..n_out {
            grad[off + n_out * n_in + i] += delta[i];
        }
        if k > 1 {
            // Chain through the weights, then through tanh (whose output
            // is the cached activation itself).
            let mut g = vec![0.0; n_in];
            for (i, &d) in delta.iter().enumerate() {
                let row = &params[off + i * n_in..off + (i + 1) * n_in];
                for (gj, w) in g.iter_mut().zip(row) {
                    *gj += d * w;
                }
            }
            for (gj, a) in g.iter_mut().zip(prev) {
                *gj *= 1.0 - a * a;
            }
            delta = g;
        }
    }
}
