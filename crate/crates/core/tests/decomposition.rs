use std::sync::Arc;

use bikoszul::decomposition::{decompose, search_partition, GradedMatrix};
use bikoszul::homology::minimal_resolution;
use bikoszul::rewrite::complete;
use bikoszul::{parse_algebra, parse_module, Error};

const EXAMPLE: &str = "field Q\ngens x,y,z,w\nrel y*x\nrel z*z*y\nrel w*z\n";

/// Each row's nonzero entries as words, up to a nonzero scalar.
fn shape(f: &GradedMatrix, alg: &bikoszul::AlgebraPresentation) -> Vec<Vec<String>> {
    let mut rows: Vec<Vec<String>> = f
        .to_record(alg)
        .entries
        .into_iter()
        .map(|r| r.into_iter().map(|e| e.trim_start_matches('-').to_string()).collect())
        .collect();
    rows.sort();
    rows
}

#[test]
fn example_matrices_and_decomposition() {
    let a = parse_algebra(EXAMPLE).unwrap();
    let gb = Arc::new(complete(&a, 8).unwrap());
    let m = parse_module("free 0,0\nrel x,0\nrel 0,y\n", &a).unwrap();
    let res = minimal_resolution(&gb, &m, 5, 8).unwrap();
    let degrees: Vec<Vec<usize>> = res.modules().iter().map(|q| q.degrees()).collect();
    assert_eq!(degrees, vec![vec![0, 0], vec![1, 1], vec![2, 3], vec![4, 4], vec![5], vec![]]);

    let expected: [&[&[&str]]; 4] = [
        &[&["0", "y"], &["x", "0"]],
        &[&["0", "z*z"], &["y", "0"]],
        &[&["0", "w"], &["z*z", "0"]],
        &[&["w", "0"]],
    ];
    for (m, want) in expected.iter().enumerate() {
        let f = GradedMatrix::from_differential(&res, m + 1).unwrap();
        let got = shape(&f, &a);
        // Columns may also be permuted; compare both orders.
        let mut want: Vec<Vec<String>> = want.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
        want.sort();
        let mut swapped: Vec<Vec<String>> = want.iter().map(|r| r.iter().rev().cloned().collect()).collect();
        swapped.sort();
        assert!(got == want || (f.ncols() == 2 && got == swapped), "M_{}: {got:?}", m + 1);
    }

    let p = search_partition(&res, 2, 12).unwrap();
    let result = decompose(&res, 2, Some(&p)).unwrap();
    for c in &result.transcript {
        assert!(c.holds, "{}", c.claim);
    }
    let flat = |d: Vec<Vec<usize>>| d.into_iter().flatten().collect::<Vec<_>>();
    let mut parts = [flat(result.prime.degrees()), flat(result.double_prime.degrees())];
    parts.sort();
    assert_eq!(parts[0], vec![0, 1, 2, 4, 5]);
    assert_eq!(parts[1], vec![0, 1, 3, 4]);
    let rel = |p: &bikoszul::ModulePresentation| p.format(&a);
    let (mp, mpp) = (rel(&result.prime.presentation), rel(&result.double_prime.presentation));
    assert!(mp.contains("rel x"), "{mp}");
    assert!(mpp.contains("rel y"), "{mpp}");
    assert!(result.verified());
}

#[test]
fn non_admissible_partition_is_rejected() {
    let a = parse_algebra(EXAMPLE).unwrap();
    let gb = Arc::new(complete(&a, 8).unwrap());
    let m = parse_module("free 0,0\nrel x,0\nrel 0,y\n", &a).unwrap();
    let res = minimal_resolution(&gb, &m, 5, 8).unwrap();
    let mut p = search_partition(&res, 2, 12).unwrap();
    // Swap the two degree-one generators: the prime row then hits a double-prime column.
    let s = &mut p.steps[1];
    std::mem::swap(&mut s.prime, &mut s.double_prime);
    let err = decompose(&res, 2, Some(&p)).unwrap_err();
    assert!(matches!(err, Error::NoPartition(_) | Error::NotAdmissible { .. }), "{err}");
}
