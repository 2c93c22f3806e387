//! Exhaustive counts of resonant quadruples against the counting bounds, and the
//! counterexample that appears once the exclusions are dropped.

use wicknls::lattice_counting::{remark_counterexample, verify_counting_bounds, BoundId, COUNTING_EPS};

fn main() -> wicknls::error::Result<()> {
    let sweep = verify_counting_bounds(8, COUNTING_EPS)?;
    println!("{} tuples, partition identity: {}", sweep.reports.len(), sweep.reports.iter().all(|r| r.partition_identity_holds()));
    for id in BoundId::ALL {
        let c4 = sweep.constant(id, 4).map(|f| f.constant).unwrap_or(f64::NAN);
        let c8 = sweep.constant(id, 8).map(|f| f.constant).unwrap_or(f64::NAN);
        println!("{:<5} C(4) = {c4:7.3}  C(8) = {c8:7.3}", id.label());
    }
    for p in remark_counterexample(1, &[2, 4, 8], COUNTING_EPS)? {
        println!("{}: with {:.2}, without {:.2}", p.tuple.label(), p.ratio_with(), p.ratio_without());
    }
    Ok(())
}
