//! Grid transforms between Fourier coefficients and physical samples on T².

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

thread_local! {
    static PLANS: RefCell<(FftPlanner<f64>, HashMap<(usize, bool), Arc<dyn Fft<f64>>>)> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

/// Cached plan for a transform of length `len`; `inverse` selects the `e^{+}` kernel.
pub fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANS.with(|cell| {
        let (planner, cache) = &mut *cell.borrow_mut();
        cache
            .entry((len, inverse))
            .or_insert_with(|| {
                if inverse {
                    planner.plan_fft_inverse(len)
                } else {
                    planner.plan_fft_forward(len)
                }
            })
            .clone()
    })
}

/// Smallest 5-smooth integer `>= min`.
pub fn fft_size(min: usize) -> usize {
    let mut n = min.max(1);
    loop {
        let mut k = n;
        for p in [2, 3, 5] {
            while k % p == 0 {
                k /= p;
            }
        }
        if k == 1 {
            return n;
        }
        n += 1;
    }
}

/// Unnormalized 2-d transform of a row-major `m × m` array in place.
pub fn transform_2d(data: &mut [C64], m: usize, inverse: bool) {
    debug_assert_eq!(data.len(), m * m);
    let fft = plan(m, inverse);
    let mut scratch = vec![C64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    fft.process_with_scratch(data, &mut scratch);
    transpose(data, m);
    fft.process_with_scratch(data, &mut scratch);
    transpose(data, m);
}

fn transpose(data: &mut [C64], m: usize) {
    for i in 0..m {
        for j in (i + 1)..m {
            data.swap(i * m + j, j * m + i);
        }
    }
}
