//! Shared inputs for the benchmarks.

use resonax_core::{PolyMap, WeightMatrix};

/// Weight matrices of growing difficulty for enumeration and resonance.
pub fn weight_fixtures() -> Vec<(&'static str, WeightMatrix)> {
    let m = |rows: Vec<Vec<i64>>| WeightMatrix::new(rows).expect("valid fixture");
    vec![
        ("circular-4", m(vec![vec![1]; 4])),
        (
            "quasi-circular-1-2-3-5",
            m(vec![vec![1], vec![2], vec![3], vec![5]]),
        ),
        (
            "rank-2",
            m(vec![vec![1, 0], vec![1, 1], vec![1, -1], vec![2, 1]]),
        ),
        ("steep-1-7", m(vec![vec![1], vec![7]])),
    ]
}

/// Shear maps `(z_1, z_2 + z_1^k)` for the compliance benchmark.
pub fn shear_fixtures() -> Vec<(u32, PolyMap)> {
    [2, 5, 10]
        .into_iter()
        .map(|k| (k, PolyMap::shear(k)))
        .collect()
}
