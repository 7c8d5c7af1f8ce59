use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::types::{Matching, TupleSet};

/// Consecutive blocks of `d` agents along the master order. For preferences
/// derived from a strict order this is the unique stable matching; the last
/// `n mod d` agents stay unmatched.
pub fn strict_order_solve(inst: &Instance) -> Result<Matching> {
    let poset = inst.poset().ok_or(Error::UnsupportedSource)?;
    if !inst.is_complete() {
        return Err(Error::Incomplete);
    }
    let lpo = inst.lpo().expect("poset source");
    if lpo.kappa() > 0 {
        return Err(Error::NotStrictOrder { kappa: lpo.kappa() });
    }
    debug_assert!(poset.is_total());
    Ok(consecutive_blocks(lpo.order().iter().map(|a| a.0), inst.d()))
}

pub(crate) fn consecutive_blocks(order: impl Iterator<Item = u32>, d: usize) -> Matching {
    let order: Vec<u32> = order.collect();
    let groups = order
        .chunks_exact(d)
        .map(|c| {
            let mut c = c.to_vec();
            c.sort_unstable();
            TupleSet::from_sorted(&c)
        })
        .collect();
    Matching::new(groups)
}
