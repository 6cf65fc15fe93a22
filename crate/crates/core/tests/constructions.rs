use bikoszul::constructions::{
    alternating_word_count, build_strongly_bikoszul, corpus_search, ext_sum_check, free_product, CorpusParams,
};
use bikoszul::homology::Window;
use bikoszul::koszulity::{obstruction_for, Pattern};
use bikoszul::rewrite::complete;
use bikoszul::{parse_algebra, Error};

fn window(length: usize, degree_bound: usize) -> Window {
    Window { length, degree_bound }
}

#[test]
fn ext_of_a_free_product_is_a_sum() {
    let a = parse_algebra("field Q\ngens x\nrel x*x\n").unwrap();
    let b = parse_algebra("field Q\ngens y\nrel y*y*y\n").unwrap();
    let r = ext_sum_check(&a, &b, window(6, 8), 32).unwrap();
    assert!(r.holds(), "{r:?}");
    assert_eq!(r.unclassified, 0);
    assert!(!r.mixed_products.is_empty());
    let row = |i, j| r.rows.iter().find(|x| x.i == i && x.j == j).map(|x| x.product);
    assert_eq!(row(1, 1), Some(2));
    assert_eq!(row(2, 2), Some(1));
    assert_eq!(row(2, 3), Some(1));
    // Odd rows of y³ sit in degrees 3m+1, even rows in 3m; x² adds the diagonal.
    assert_eq!(row(3, 3), Some(1));
    assert_eq!(row(3, 4), Some(1));
    assert_eq!(row(4, 6), Some(1));
}

#[test]
fn trivial_factor_leaves_tables_unchanged() {
    let a = parse_algebra("field Q\ngens x,y\nrel y*x\nrel x*x*y\n").unwrap();
    let one = parse_algebra("field Q\n").unwrap();
    let r = ext_sum_check(&a, &one, window(4, 7), 8).unwrap();
    assert!(r.holds());
    assert!(r.rows.iter().all(|x| x.right == 0 && x.product == x.left));
}

#[test]
fn hilbert_function_counts_alternating_words() {
    let pairs = [
        ("field Q\ngens x\nrel x*x\n", "field Q\ngens y\nrel y*y*y\n"),
        ("field Q\ngens x,y\nrel x*y - y*x\n", "field Q\ngens z\nrel z*z\n"),
        ("field GF(3)\ngens x,y\nrel x*y\nrel y*y*x\n", "field GF(3)\ngens u,v\nrel u*u + v*v\n"),
    ];
    for (p, q) in pairs {
        let (a, b) = (parse_algebra(p).unwrap(), parse_algebra(q).unwrap());
        let ga = complete(&a, 7).unwrap();
        let gb = complete(&b, 7).unwrap();
        let g = complete(&free_product(&a, &b).unwrap(), 7).unwrap();
        for j in 0..=7 {
            assert_eq!(g.hilbert(j).unwrap(), alternating_word_count(&ga, &gb, j), "{p} ⊔ {q}, degree {j}");
        }
    }
}

#[test]
fn strongly_bikoszul_from_a_corpus_pair() {
    let w = window(5, 8);
    let corpus = corpus_search(&CorpusParams {
        d: 2,
        generators: 2,
        max_relations: 2,
        window: w,
    })
    .unwrap();
    let first = |p: Pattern| corpus.iter().find(|e| e.patterns == vec![p]).map(|e| e.algebra.clone());
    let a = first(Pattern::DeltaPrime { d: 2 }).expect("a δ′ entry");
    let b = first(Pattern::DeltaDoublePrime { d: 2 }).expect("a δ″ entry");
    let built = build_strongly_bikoszul(&a, &b, None, w).unwrap();
    assert_eq!(built.d, 2);
    assert!(built.strongly_in_window(), "{built:?}");
    assert_eq!(built.obstructions.len(), 1);

    let swapped = free_product(&b, &a).unwrap();
    let w2 = bikoszul::constructions::classify_algebra(&swapped, w).unwrap();
    assert_eq!(w2.bikoszul_parameter(), Some(2));

    // δ″ with d = 3: a single relation without self-overlaps.
    let c = parse_algebra("field Q\ngens u,v\nrel u*u*u*v\n").unwrap();
    assert!(matches!(build_strongly_bikoszul(&a, &c, None, w), Err(Error::Precondition(_))));
    assert!(matches!(
        build_strongly_bikoszul(&a, &b, Some(3), w),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn routes_agree_on_bikoszul_corpus_entries() {
    let w = window(5, 8);
    let corpus = corpus_search(&CorpusParams {
        d: 2,
        generators: 3,
        max_relations: 2,
        window: w,
    })
    .unwrap();
    let mut checked = 0;
    for e in corpus.iter().filter(|e| e.patterns.contains(&Pattern::BiKoszul { d: 2 })) {
        let r = obstruction_for(&e.algebra, 1, w).unwrap();
        assert_eq!(r.routes_agree(), Some(true), "{}", e.algebra);
        checked += 1;
    }
    assert!(checked > 0);
}
