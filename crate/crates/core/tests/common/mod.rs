//! Brute-force orbit counting used as independent oracles by the
//! integration tests. Nothing here reuses the canonical forms of the
//! library: raw representatives are enumerated and glued by union-find
//! along the defining relations.

#![allow(dead_code)]

use std::collections::BTreeMap;

use skewcubes::symseq::{ElemSource, FinSymSeq};
use skewcubes::Permutation;

pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    pub fn classes(&mut self) -> usize {
        (0..self.parent.len()).filter(|&x| self.find(x) == x).count()
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `Σ_k` with a lookup from image lists to indices.
struct Perms {
    all: Vec<Permutation>,
    index: BTreeMap<Vec<usize>, usize>,
}

impl Perms {
    fn new(k: usize) -> Self {
        let all = Permutation::all(k);
        let index = all.iter().enumerate().map(|(i, p)| (p.images().to_vec(), i)).collect();
        Perms { all, index }
    }

    fn idx(&self, p: &Permutation) -> usize {
        self.index[p.images()]
    }
}

/// Orbits of `X(i) × Y(j) × Σ_k` under `(x·a, y·b, τ) ~ (x, y, (a ⊕ b)∘τ)`,
/// summed over `i + j = k`: the size of `(X ⊙ Y)(k)`.
pub fn graded_orbit_count(x: &FinSymSeq, y: &FinSymSeq, k: usize) -> usize {
    let perms = Perms::new(k);
    let nk = perms.all.len();
    let mut total = 0;
    for i in 0..=k {
        let j = k - i;
        let (nx, ny) = (x.len(i), y.len(j));
        if nx == 0 || ny == 0 {
            continue;
        }
        let id = |a, b, t| (a * ny + b) * nk + t;
        let mut uf = UnionFind::new(nx * ny * nk);
        for a in 0..nx {
            for b in 0..ny {
                for (t, tau) in perms.all.iter().enumerate() {
                    for s in 0..i.saturating_sub(1) {
                        let g = Permutation::block_sum(&[Permutation::adjacent(i, s), Permutation::identity(j)]);
                        uf.union(id(x.act_adjacent(i, a, s), b, t), id(a, b, perms.idx(&g.compose(tau))));
                    }
                    for s in 0..j.saturating_sub(1) {
                        let g = Permutation::block_sum(&[Permutation::identity(i), Permutation::adjacent(j, s)]);
                        uf.union(id(a, y.act_adjacent(j, b, s), t), id(a, b, perms.idx(&g.compose(tau))));
                    }
                }
            }
        }
        total += uf.classes();
    }
    total
}

/// Weak compositions of `n` into `l` parts.
fn compositions(n: usize, l: usize) -> Vec<Vec<usize>> {
    if l == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut rest in compositions(n - first, l - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn tuples<E: Clone>(choices: &[Vec<E>]) -> Vec<Vec<E>> {
    choices.iter().fold(vec![Vec::new()], |acc, c| {
        acc.iter()
            .flat_map(|p| {
                c.iter().map(move |e| {
                    let mut v = p.clone();
                    v.push(e.clone());
                    v
                })
            })
            .collect()
    })
}

/// Orbits of raw composites `(x; t_1, .., t_ℓ; τ)` of arity `n` under
/// `(x; t·b; τ) ~ (x; t; (⊕b)∘τ)` and
/// `(x·σ; t; τ) ~ (x; t_{σ^{-1}}; σ⟨|t|⟩∘τ)`: the size of `(G ∘ T)(n)`.
pub fn composite_orbit_count<T: ElemSource>(g: &FinSymSeq, t: &T, n: usize) -> usize {
    let perms = Perms::new(n);
    let mut raw: BTreeMap<(usize, usize, Vec<T::Elem>, usize), usize> = BTreeMap::new();
    let mut comps: Vec<(usize, usize, Vec<T::Elem>)> = Vec::new();
    for l in g.arities() {
        for sizes in compositions(n, l) {
            let choices: Vec<Vec<T::Elem>> = sizes.iter().map(|&a| t.elements(a).expect("enumerable")).collect();
            for inners in tuples(&choices) {
                for x in 0..g.len(l) {
                    comps.push((l, x, inners.clone()));
                }
            }
        }
    }
    for (l, x, inners) in &comps {
        for tau in 0..perms.all.len() {
            let next = raw.len();
            raw.insert((*l, *x, inners.clone(), tau), next);
        }
    }
    let mut uf = UnionFind::new(raw.len());
    for (l, x, inners) in &comps {
        let sizes: Vec<usize> = inners.iter().map(|e| t.arity_of(e)).collect();
        for (ti, tau) in perms.all.iter().enumerate() {
            for (i, e) in inners.iter().enumerate() {
                for s in 0..sizes[i].saturating_sub(1) {
                    let mut moved = inners.clone();
                    moved[i] = t.act(e, &Permutation::adjacent(sizes[i], s));
                    let blocks: Vec<Permutation> = sizes
                        .iter()
                        .enumerate()
                        .map(|(b, &a)| if b == i { Permutation::adjacent(a, s) } else { Permutation::identity(a) })
                        .collect();
                    let there = raw[&(*l, *x, inners.clone(), perms.idx(&Permutation::block_sum(&blocks).compose(tau)))];
                    uf.union(raw[&(*l, *x, moved, ti)], there);
                }
            }
            for j in 0..l.saturating_sub(1) {
                let sigma = Permutation::adjacent(*l, j);
                let mut swapped = inners.clone();
                swapped.swap(j, j + 1);
                let p = Permutation::block_permute(&sigma, &sizes).compose(tau);
                uf.union(raw[&(*l, g.act_adjacent(*l, *x, j), inners.clone(), ti)], raw[&(*l, *x, swapped, perms.idx(&p))]);
            }
        }
    }
    uf.classes()
}

/// Orbits of one arity of a sequence, by breadth-first search along the
/// generator tables.
pub fn orbit_sizes(s: &FinSymSeq, k: usize) -> Vec<usize> {
    let n = s.len(k);
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        let mut size = 0;
        while let Some(e) = queue.pop_front() {
            size += 1;
            for j in 0..k.saturating_sub(1) {
                let f = s.act_adjacent(k, e, j);
                if !seen[f] {
                    seen[f] = true;
                    queue.push_back(f);
                }
            }
        }
        out.push(size);
    }
    out.sort_unstable();
    out
}
