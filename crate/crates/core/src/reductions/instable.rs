use crate::instance::Instance;
use crate::types::TupleSet;

/// Master list of 2-sets over agents `a..f` (indices 0..5).
pub const INSTABLE_MASTER_LIST: [[u32; 2]; 15] = [
    [0, 1],
    [0, 2],
    [0, 3],
    [0, 5],
    [1, 4],
    [2, 3],
    [0, 4],
    [1, 5],
    [2, 4],
    [1, 3],
    [3, 4],
    [1, 2],
    [2, 5],
    [3, 5],
    [4, 5],
];

/// Six agents with a master list of 2-sets and no stable matching.
pub fn instable_instance() -> Instance {
    let names = ["a", "b", "c", "d", "e", "f"].map(String::from).to_vec();
    let list = INSTABLE_MASTER_LIST
        .iter()
        .map(|p| TupleSet::from(&p[..]))
        .collect();
    Instance::from_master_list(3, names, list).expect("fixed instance is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stability::brute_force_solve;

    #[test]
    fn has_no_stable_matching() {
        let inst = instable_instance();
        assert_eq!(brute_force_solve(&inst).unwrap(), None);
        let master: Vec<TupleSet> = INSTABLE_MASTER_LIST.iter().map(|p| TupleSet::from(&p[..])).collect();
        assert!(inst.is_derived_from_master_list(&master));
    }
}
