//! Random check of the dual-vector bound on small integer systems.

use wicknls::lattice_counting::{dual_vector_bound_check, dual_vector_extreme};

fn main() -> wicknls::error::Result<()> {
    let extreme = dual_vector_extreme(&[vec![2, 1], vec![1, 3]], 1.0)?;
    println!("extreme dual norm for [[2,1],[1,3]] at bound 1: {extreme:.4}");
    for n in [16, 64, 256] {
        let r = dual_vector_bound_check(2, n, 2.0, 2.0, 2000, 1)?;
        println!("N = {n:<4} max ratio {:.3e} (rejected {})", r.max_ratio, r.rejected);
    }
    Ok(())
}
