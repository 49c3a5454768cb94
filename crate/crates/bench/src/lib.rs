//! Workloads shared by the criterion benches.

use fibdet::{ExactMatrix, PowerMatrixSpec, RecurrenceParams};

/// Power matrix for `(r, s, k, n)` over the given parameters.
pub fn power_workload(
    params: &RecurrenceParams,
    r: u32,
    s: i64,
    k: i64,
    n: i64,
) -> (PowerMatrixSpec, ExactMatrix) {
    let spec = PowerMatrixSpec {
        params: params.clone(),
        r,
        s,
        k,
        n,
    };
    let m = fibdet::matrices::build_power_matrix(&spec);
    (spec, m)
}

/// Parameters with `|c2| != 1`, so negative shifts produce genuine rationals.
pub fn rational_params() -> RecurrenceParams {
    RecurrenceParams::from_ints(2, -1, 1, 2).unwrap()
}
