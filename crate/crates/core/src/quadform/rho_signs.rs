// Generated by `cargo run --release -p padic-riesz --example gen_rho_signs`.
// Columns: prime, sign for class p, sign for class εp.

pub(super) const RHO_SIGNS: &[(u64, i8, i8)] = &[
    (3, 1, -1),
    (5, 1, -1),
    (7, 1, -1),
    (11, 1, -1),
    (13, 1, -1),
    (17, 1, -1),
    (19, 1, -1),
    (23, 1, -1),
    (29, 1, -1),
    (31, 1, -1),
    (37, 1, -1),
    (41, 1, -1),
    (43, 1, -1),
    (47, 1, -1),
    (53, 1, -1),
    (59, 1, -1),
    (61, 1, -1),
    (67, 1, -1),
    (71, 1, -1),
    (73, 1, -1),
    (79, 1, -1),
    (83, 1, -1),
    (89, 1, -1),
    (97, 1, -1),
];
