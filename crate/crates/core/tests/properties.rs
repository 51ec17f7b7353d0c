mod common;

macro_rules! suites {
    ($($name:ident),* $(,)?) => {
        $(
            #[test]
            fn $name() {
                if let Err(e) = common::$name() {
                    panic!("{e}");
                }
            }
        )*
    };
}

suites!(
    mobius_associativity,
    mobius_chain_rule,
    incarnation_homomorphism,
    mobius_fixed_points,
    lfm_round_trip,
    partition_disjoint_cover,
    cycle_start_independence,
    contact_rotation_covariance,
    report_invariants,
    canonical_idempotent,
    canonical_membership,
    spiral_membership,
    jacobson_pairs,
    similarity_invariance,
);
