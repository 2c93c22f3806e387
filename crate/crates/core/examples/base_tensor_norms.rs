//! Exact partition norms of the base tensor next to Schur and Hilbert-Schmidt bounds.

use wicknls::lattice_counting::DyadicTuple;
use wicknls::tensor_norms::{base_tensor, hilbert_schmidt, partition_norm, schur_bound, BaseBound, BaseTensorSpec};

fn main() -> wicknls::error::Result<()> {
    let tuple = DyadicTuple::balanced(4)?;
    let h = base_tensor(&BaseTensorSpec { tuple, m: 0 })?;
    println!("support {} at {} m=0, HS {:.3}", h.len(), tuple.label(), hilbert_schmidt(&h));
    for id in BaseBound::ALL {
        let p = id.partition();
        println!("{:<16} exact {:8.4}  schur {:8.4}", id.label(), partition_norm(&h, &p)?, schur_bound(&h, &p)?);
    }
    Ok(())
}
