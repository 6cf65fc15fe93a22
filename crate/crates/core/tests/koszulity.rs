use std::sync::Arc;

use bikoszul::homology::{ext_generated_in_degree0, minimal_resolution, Window};
use bikoszul::koszulity::{
    bikoszul_module_check, strongly_module_check, verify_ext_splitting, StronglyVerdict,
};
use bikoszul::rewrite::complete;
use bikoszul::{parse_algebra, parse_module, ModulePresentation};

const EXAMPLE: &str = "field Q\ngens x,y,z,w\nrel y*x\nrel z*z*y\nrel w*z\n";

#[test]
fn example_module_checks() {
    let a = parse_algebra(EXAMPLE).unwrap();
    let gb = Arc::new(complete(&a, 7).unwrap());
    let m = parse_module("free 0,0\nrel x,0\nrel 0,y\n", &a).unwrap();
    let w = Window {
        length: 5,
        degree_bound: 7,
    };
    assert!(bikoszul_module_check(&gb, &m, 2, w).unwrap().verdict.matches());

    let split = verify_ext_splitting(&gb, &m, 2, 0, w).unwrap();
    assert!(split.holds(), "{:?}", split.rows);
    assert_eq!(split.rows[0].ext_dim, 1);
    assert_eq!(split.rows[1].ext_dim, 1);

    let strongly = strongly_module_check(&gb, &m, 2, w).unwrap();
    assert_eq!(strongly.verdict, StronglyVerdict::HoldsInWindow);
    assert!(strongly.stages.iter().all(|s| s.radical_condition));

    let res_k = minimal_resolution(&gb, &ModulePresentation::trivial(&a), 5, 7).unwrap();
    let res_m = minimal_resolution(&gb, &m, 5, 7).unwrap();
    let gen = ext_generated_in_degree0(&res_k, &res_m).unwrap();
    // A strongly bi-Koszul module has E(M) generated in degree 0.
    assert!(gen.all_generated());
}
