//! A pair encoding of binary relations and a reference transitive closure.

use ml_core::semantics::ElemSet;

/// Warshall's algorithm on an adjacency matrix.
pub fn warshall(n: usize, rel: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; n]; n];
    for &(a, b) in rel {
        r[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

/// Base elements `0..n`, one pair element per ordered pair, and a
/// definedness element. `pair $ a $ b` is the pair element; everything else
/// applies to nothing, except `def`.
pub fn pair_model(n: usize, rel: &[(usize, usize)]) -> (ml_core::semantics::Model, impl Fn(usize, usize) -> usize) {
    use ml_core::syntax::Symbol;
    use std::collections::BTreeMap;
    let pair_el = move |a: usize, b: usize| n + a * n + b;
    let pair_sym = n + n * n; // the interpretation of `pair`
    let partial = |a: usize| pair_sym + 1 + a; // `pair $ a`
    let d = pair_sym + 1 + n;
    let size = d + 1;
    let full = ElemSet::full(size);
    let mut elements: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    for a in 0..n {
        for b in 0..n {
            elements.push(format!("p{a}{b}"));
        }
    }
    elements.push("pair".into());
    for a in 0..n {
        elements.push(format!("pair_{a}"));
    }
    elements.push("d".into());
    let app = move |x: usize, y: usize| {
        if x == d {
            full
        } else if x == pair_sym && y < n {
            ElemSet::singleton(partial(y))
        } else if x > pair_sym && x < d && y < n {
            ElemSet::singleton(pair_el(x - pair_sym - 1, y))
        } else {
            ElemSet::EMPTY
        }
    };
    let mut syms = BTreeMap::new();
    syms.insert(Symbol::new("pair"), ElemSet::singleton(pair_sym));
    syms.insert(Symbol::new("def"), ElemSet::singleton(d));
    syms.insert(
        Symbol::new("R"),
        rel.iter().map(|&(a, b)| pair_el(a, b)).collect(),
    );
    let m = ml_core::semantics::Model::new("pairs", elements, app, syms).unwrap();
    (m, pair_el)
}
