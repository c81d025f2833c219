//! Thin helpers over `rustfft` for the unnormalized transforms used throughout.
//!
//! `forward` computes `X[k] = Σ x[t] e^{-2πi k t / n}` and `inverse` computes
//! `x[t] = Σ X[k] e^{+2πi k t / n}`; neither divides by `n`.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Pair of planned transforms for one length.
pub struct Plan {
    len: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Plan {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            len,
            fwd: planner.plan_fft_forward(len),
            inv: planner.plan_fft_inverse(len),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn forward(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len() % self.len, 0);
        self.fwd.process(buf);
    }

    pub fn inverse(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len() % self.len, 0);
        self.inv.process(buf);
    }
}

/// In-place 2-D transform of a row-major `rows x cols` buffer.
pub fn forward_2d(buf: &mut [Complex64], rows: usize, cols: usize) {
    transform_2d(buf, rows, cols, false);
}

pub fn inverse_2d(buf: &mut [Complex64], rows: usize, cols: usize) {
    transform_2d(buf, rows, cols, true);
}

fn transform_2d(buf: &mut [Complex64], rows: usize, cols: usize, inverse: bool) {
    assert_eq!(buf.len(), rows * cols);
    let row_plan = Plan::new(cols);
    if inverse {
        row_plan.inverse(buf);
    } else {
        row_plan.forward(buf);
    }
    let col_plan = Plan::new(rows);
    let mut column = vec![Complex64::new(0.0, 0.0); rows];
    for c in 0..cols {
        for r in 0..rows {
            column[r] = buf[r * cols + c];
        }
        if inverse {
            col_plan.inverse(&mut column);
        } else {
            col_plan.forward(&mut column);
        }
        for r in 0..rows {
            buf[r * cols + c] = column[r];
        }
    }
}
