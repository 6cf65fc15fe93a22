#![allow(dead_code)]

use std::collections::BTreeMap;

use bikoszul::homology::{BettiTable, Window};
use bikoszul::{parse_algebra, AlgebraPresentation};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const EXAMPLE: &str = "field Q\ngens x,y,z,w\nrel y*x\nrel z*z*y\nrel w*z\n";
pub const EXAMPLE_MODULE: &str = "free 0,0\nrel x,0\nrel 0,y\n";
pub const GAMMA: &str = "field Q\nvertices 6\n\
    arrow alpha 1 2\narrow beta 2 3\narrow gamma 3 4\narrow delta 4 5\narrow pi 5 6\n\
    rel alpha*beta\nrel beta*gamma*delta\nrel delta*pi\n";

pub fn window(length: usize, degree_bound: usize) -> Window {
    Window { length, degree_bound }
}

/// Betti table of `k` over a monomial algebra from Anick chains: a chain
/// `w` with last link `t` extends by `u` when `tu` ends in an obstruction
/// starting inside `t` and contains no earlier obstruction.
pub fn anick_betti(
    vertices: usize,
    arrows: &[(usize, usize)],
    obstructions: &[Vec<usize>],
    w: Window,
) -> BettiTable {
    let longest = obstructions.iter().map(Vec::len).max().unwrap_or(0);
    let occurs_ending_at = |s: &[usize], end: usize| -> Vec<usize> {
        obstructions
            .iter()
            .filter(|o| o.len() <= end + 1 && s[end + 1 - o.len()..=end] == o[..])
            .map(|o| end + 1 - o.len())
            .collect()
    };
    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    counts.insert((0, 0), vertices);
    // (word, length of last link)
    let mut level: Vec<(Vec<usize>, usize)> = (0..arrows.len()).map(|a| (vec![a], 1)).collect();
    let mut n = 1;
    while n <= w.length && !level.is_empty() {
        for (word, _) in &level {
            if word.len() <= w.degree_bound {
                *counts.entry((n, word.len())).or_default() += 1;
            }
        }
        let mut next = Vec::new();
        for (word, link) in &level {
            let t = &word[word.len() - link..];
            let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
            for len in 1..=longest {
                let mut grown = Vec::new();
                for u in frontier {
                    let last = *u.last().unwrap_or(&word[word.len() - 1]);
                    for a in 0..arrows.len() {
                        if arrows[last].1 != arrows[a].0 {
                            continue;
                        }
                        let mut u2 = u.clone();
                        u2.push(a);
                        let tu: Vec<usize> = t.iter().chain(&u2).copied().collect();
                        let end = tu.len() - 1;
                        let earlier = (0..end).any(|e| !occurs_ending_at(&tu, e).is_empty());
                        if earlier {
                            continue;
                        }
                        if occurs_ending_at(&tu, end).iter().any(|&s| s < t.len()) {
                            let mut w2 = word.clone();
                            w2.extend(&u2);
                            if w2.len() <= w.degree_bound {
                                next.push((w2, len));
                            }
                        } else {
                            grown.push(u2);
                        }
                    }
                }
                frontier = grown;
            }
        }
        level = next;
        n += 1;
    }
    let records: Vec<_> = counts
        .into_iter()
        .map(|((i, j), beta)| bikoszul::homology::BettiRecord { i, j, beta })
        .collect();
    BettiTable::from_records(&records, w)
}

/// Anick oracle for a connected monomial algebra given by letter words.
pub fn anick_connected(generators: usize, relations: &[Vec<usize>], w: Window) -> BettiTable {
    anick_betti(1, &vec![(0, 0); generators], relations, w)
}

/// A random monomial algebra: up to `max_gens` generators and up to
/// `max_rels` relations of degree 2..=`max_degree`.
pub fn random_monomial(
    rng: &mut ChaCha8Rng,
    max_gens: usize,
    max_rels: usize,
    max_degree: usize,
) -> (AlgebraPresentation, usize, Vec<Vec<usize>>) {
    let names = ["x", "y", "z"];
    let g = rng.gen_range(1..=max_gens);
    let r = rng.gen_range(1..=max_rels);
    let mut rels: Vec<Vec<usize>> = Vec::new();
    for _ in 0..r {
        let len = rng.gen_range(2..=max_degree);
        let w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..g)).collect();
        if !rels.contains(&w) {
            rels.push(w);
        }
    }
    let mut text = format!("field Q\ngens {}\n", names[..g].join(","));
    for w in &rels {
        let word: Vec<&str> = w.iter().map(|&l| names[l]).collect();
        text.push_str(&format!("rel {}\n", word.join("*")));
    }
    (parse_algebra(&text).unwrap(), g, minimal_words(&rels))
}

/// Drops words containing another word of the set.
pub fn minimal_words(rels: &[Vec<usize>]) -> Vec<Vec<usize>> {
    rels.iter()
        .filter(|w| {
            !rels
                .iter()
                .any(|u| u.len() < w.len() && w.windows(u.len()).any(|s| s == u.as_slice()))
        })
        .cloned()
        .collect()
}
