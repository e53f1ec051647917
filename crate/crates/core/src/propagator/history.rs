//! Memory-integral bookkeeping for the Volterra steppers.
//!
//! Every scheme represents `I_{k+1} = ∫_0^{t_{k+1}} μ(t_{k+1} - τ) x(τ) dτ`
//! with `x` linear between grid points, split as
//! `I_{k+1} = pending() + self_weight() · x_{k+1}`, where `pending` only
//! depends on samples already pushed.

use num_complex::Complex64;

use super::soe::{linear_segment_weights, ExponentialSum};
use crate::spectral::KernelTable;

pub(crate) trait MemoryHistory {
    fn pending(&self) -> Complex64;
    fn self_weight(&self) -> Complex64;
    fn push(&mut self, x: Complex64);
}

pub(crate) struct NoMemory;

impl MemoryHistory for NoMemory {
    fn pending(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    fn self_weight(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    fn push(&mut self, _x: Complex64) {}
}

/// Full-history product trapezoid over a precomputed kernel table: O(k) per step.
pub(crate) struct DirectHistory {
    // lag weights stored back to front: rev[cap - l] = W_l
    rev_re: Vec<f64>,
    rev_im: Vec<f64>,
    far: Vec<Complex64>,
    near0: Complex64,
    hist_re: Vec<f64>,
    hist_im: Vec<f64>,
    pending: Complex64,
}

impl DirectHistory {
    /// Capacity for `table.len()` steps beyond the initial sample.
    pub(crate) fn new(table: &KernelTable) -> Self {
        let near = table.near_weights();
        let far = table.far_weights();
        let cap = table.len();
        let mut rev_re = vec![0.0; cap];
        let mut rev_im = vec![0.0; cap];
        for l in 1..cap {
            let w = near[l] + far[l - 1];
            rev_re[cap - l] = w.re;
            rev_im[cap - l] = w.im;
        }
        Self {
            rev_re,
            rev_im,
            far: far.to_vec(),
            near0: near[0],
            hist_re: Vec::with_capacity(cap + 1),
            hist_im: Vec::with_capacity(cap + 1),
            pending: Complex64::new(0.0, 0.0),
        }
    }

    pub(crate) fn capacity(&self) -> usize {
        self.far.len()
    }
}

impl MemoryHistory for DirectHistory {
    fn pending(&self) -> Complex64 {
        self.pending
    }

    fn self_weight(&self) -> Complex64 {
        self.near0
    }

    fn push(&mut self, x: Complex64) {
        self.hist_re.push(x.re);
        self.hist_im.push(x.im);
        // samples x_0..x_k are stored; prepare H_{k+1}.
        let k = self.hist_re.len() - 1;
        if k >= self.far.len() {
            // Past the table: no further step is allowed, leave pending stale.
            return;
        }
        let cap = self.rev_re.len();
        let mut h = complex_dot(
            &self.rev_re[cap - k..cap],
            &self.rev_im[cap - k..cap],
            &self.hist_re[1..=k],
            &self.hist_im[1..=k],
        );
        h += self.far[k] * Complex64::new(self.hist_re[0], self.hist_im[0]);
        self.pending = h;
    }
}

fn complex_dot(ar: &[f64], ai: &[f64], br: &[f64], bi: &[f64]) -> Complex64 {
    debug_assert!(ar.len() == br.len() && ai.len() == bi.len() && ar.len() == ai.len());
    let mut re = [0.0f64; 4];
    let mut im = [0.0f64; 4];
    let n = ar.len() / 4 * 4;
    for (((a, b), c), d) in ar[..n]
        .chunks_exact(4)
        .zip(ai[..n].chunks_exact(4))
        .zip(br[..n].chunks_exact(4))
        .zip(bi[..n].chunks_exact(4))
    {
        for l in 0..4 {
            re[l] += a[l] * c[l] - b[l] * d[l];
            im[l] += a[l] * d[l] + b[l] * c[l];
        }
    }
    let mut sr = (re[0] + re[1]) + (re[2] + re[3]);
    let mut si = (im[0] + im[1]) + (im[2] + im[3]);
    for i in n..ar.len() {
        sr += ar[i] * br[i] - ai[i] * bi[i];
        si += ar[i] * bi[i] + ai[i] * br[i];
    }
    Complex64::new(sr, si)
}

/// Recursive history over a sum-of-exponentials kernel: O(modes) per step.
///
/// Each mode keeps `G_j = w_j (e^{-λ_j dt} Y_j + α_j x_k)`, where `Y_j` is the
/// mode's convolution with the history up to the last pushed sample.
pub(crate) struct ExponentialHistory {
    decay_re: Vec<f64>,
    decay_im: Vec<f64>,
    // w_j (e^{-λ dt} β_j + α_j): coefficient of a sample once it is no longer newest
    gain_re: Vec<f64>,
    gain_im: Vec<f64>,
    // w_j α_j: first sample has no predecessor contribution
    first: Vec<Complex64>,
    acc_re: Vec<f64>,
    acc_im: Vec<f64>,
    self_weight: Complex64,
    pending: Complex64,
    started: bool,
}

impl ExponentialHistory {
    pub(crate) fn new(sum: &ExponentialSum, dt: f64) -> Self {
        let m = sum.len();
        let mut s = Self {
            decay_re: Vec::with_capacity(m),
            decay_im: Vec::with_capacity(m),
            gain_re: Vec::with_capacity(m),
            gain_im: Vec::with_capacity(m),
            first: Vec::with_capacity(m),
            acc_re: vec![0.0; m],
            acc_im: vec![0.0; m],
            self_weight: Complex64::new(0.0, 0.0),
            pending: Complex64::new(0.0, 0.0),
            started: false,
        };
        for (w, l) in sum.weights().iter().zip(sum.rates()) {
            let z = l * dt;
            let decay = (-z).exp();
            let (older, newer) = linear_segment_weights(z);
            let alpha = w * older * dt;
            let beta = w * newer * dt;
            s.decay_re.push(decay.re);
            s.decay_im.push(decay.im);
            let gain = decay * beta + alpha;
            s.gain_re.push(gain.re);
            s.gain_im.push(gain.im);
            s.first.push(alpha);
            s.self_weight += beta;
        }
        s
    }
}

impl MemoryHistory for ExponentialHistory {
    fn pending(&self) -> Complex64 {
        self.pending
    }

    fn self_weight(&self) -> Complex64 {
        self.self_weight
    }

    fn push(&mut self, x: Complex64) {
        if !self.started {
            self.started = true;
            let mut total = Complex64::new(0.0, 0.0);
            for (j, a) in self.first.iter().enumerate() {
                let g = a * x;
                self.acc_re[j] = g.re;
                self.acc_im[j] = g.im;
                total += g;
            }
            self.pending = total;
            return;
        }
        let (xr, xi) = (x.re, x.im);
        let mut sr = 0.0;
        let mut si = 0.0;
        for j in 0..self.acc_re.len() {
            let (gr, gi) = (self.acc_re[j], self.acc_im[j]);
            let (dr, di) = (self.decay_re[j], self.decay_im[j]);
            let (cr, ci) = (self.gain_re[j], self.gain_im[j]);
            let nr = dr * gr - di * gi + cr * xr - ci * xi;
            let ni = dr * gi + di * gr + cr * xi + ci * xr;
            self.acc_re[j] = nr;
            self.acc_im[j] = ni;
            sr += nr;
            si += ni;
        }
        self.pending = Complex64::new(sr, si);
    }
}
