use super::CssCode;
use crate::gf2::{BitMatrix, BitVec, Echelon};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceMethod {
    /// Exact minimum; coset enumeration is capped at `budget` vectors.
    Exact { budget: u64 },
    /// Shortest nontrivial cycle through a single root; an upper bound.
    SystoleBfs,
}

impl Default for DistanceMethod {
    fn default() -> Self {
        DistanceMethod::Exact { budget: 1 << 26 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceStatus {
    Exact,
    UpperBound,
    /// No logical qubits: the distance is infinite.
    Undefined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorDistance {
    pub value: Option<usize>,
    pub status: DistanceStatus,
    /// A nontrivial logical of weight `value`.
    pub certificate: Option<Vec<usize>>,
    pub enumerated: u64,
}

impl SectorDistance {
    fn undefined() -> Self {
        SectorDistance {
            value: None,
            status: DistanceStatus::Undefined,
            certificate: None,
            enumerated: 0,
        }
    }

    pub fn describe(&self) -> String {
        match (self.value, self.status) {
            (Some(d), DistanceStatus::Exact) => format!("{d}(exact)"),
            (Some(d), _) => format!("<={d}(upper bound)"),
            (None, _) => "inf(undefined)".to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub d_x: SectorDistance,
    pub d_z: SectorDistance,
}

/// X and Z distances of a CSS code.
///
/// A sector whose checks have column weight at most two is a graph cycle
/// space; its exact distance is the shortest nontrivial cycle among the
/// fundamental cycles of all breadth-first trees. Other sectors are
/// enumerated over (logical class × stabilizer) combinations in Gray-code
/// order.
pub fn distance(code: &CssCode, method: DistanceMethod) -> DistanceReport {
    DistanceReport {
        d_x: distance_x(code, method),
        d_z: distance_z(code, method),
    }
}

/// Minimum weight of a nontrivial X logical.
pub fn distance_x(code: &CssCode, method: DistanceMethod) -> SectorDistance {
    sector(&code.hz, &code.hx, &code.logical_x, &code.logical_z, method)
}

/// Minimum weight of a nontrivial Z logical.
pub fn distance_z(code: &CssCode, method: DistanceMethod) -> SectorDistance {
    sector(&code.hx, &code.hz, &code.logical_z, &code.logical_x, method)
}

/// Minimum weight of v ∈ ker(checks) \ rowspace(stabs). `dual` detects
/// nontriviality: v is a nontrivial logical iff it pairs with some dual.
fn sector(
    checks: &BitMatrix,
    stabs: &BitMatrix,
    logicals: &[BitVec],
    dual: &[BitVec],
    method: DistanceMethod,
) -> SectorDistance {
    if logicals.is_empty() {
        return SectorDistance::undefined();
    }
    let graph = Graph::from_checks(checks);
    match (method, graph) {
        (DistanceMethod::Exact { .. }, Some(g)) => g.shortest_nontrivial(dual, None),
        (DistanceMethod::SystoleBfs, Some(g)) => g.shortest_nontrivial(dual, Some(0)),
        (DistanceMethod::Exact { budget }, None) => enumerate(stabs, logicals, budget),
        (DistanceMethod::SystoleBfs, None) => {
            let best = logicals
                .iter()
                .enumerate()
                .min_by_key(|(_, l)| l.count_ones())
                .map(|(_, l)| l.clone())
                .unwrap();
            SectorDistance {
                value: Some(best.count_ones()),
                status: DistanceStatus::UpperBound,
                certificate: Some(best.to_indices()),
                enumerated: logicals.len() as u64,
            }
        }
    }
}

/// Columns of a check matrix as graph edges. Checks are nodes, plus one
/// virtual node absorbing weight-one columns; weight-zero columns are loops.
struct Graph {
    nodes: usize,
    ends: Vec<Option<(usize, usize)>>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    fn from_checks(checks: &BitMatrix) -> Option<Graph> {
        let n = checks.ncols();
        let virt = checks.nrows();
        let mut cols: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (r, row) in checks.rows().iter().enumerate() {
            for c in row.ones() {
                cols[c].push(r);
                if cols[c].len() > 2 {
                    return None;
                }
            }
        }
        let mut adj = vec![Vec::new(); virt + 1];
        let ends: Vec<Option<(usize, usize)>> = cols
            .iter()
            .enumerate()
            .map(|(e, c)| {
                let pair = match c.len() {
                    0 => return None,
                    1 => (c[0], virt),
                    _ => (c[0], c[1]),
                };
                adj[pair.0].push((pair.1, e));
                adj[pair.1].push((pair.0, e));
                Some(pair)
            })
            .collect();
        Some(Graph {
            nodes: virt + 1,
            ends,
            adj,
        })
    }

    fn shortest_nontrivial(&self, dual: &[BitVec], root: Option<usize>) -> SectorDistance {
        let n = self.ends.len();
        let nontrivial = |v: &BitVec| dual.iter().any(|d| d.dot(v));
        let mut best: Option<BitVec> = None;
        let mut tried = 0u64;
        let consider = |v: BitVec, best: &mut Option<BitVec>| {
            if nontrivial(&v) && best.as_ref().is_none_or(|b| v.count_ones() < b.count_ones()) {
                *best = Some(v);
            }
        };
        for (e, ends) in self.ends.iter().enumerate() {
            if ends.is_none() {
                tried += 1;
                consider(BitVec::unit(n, e), &mut best);
            }
        }
        let roots: Vec<usize> = match root {
            Some(r) => vec![r.min(self.nodes - 1)],
            None => (0..self.nodes).collect(),
        };
        for r in roots {
            // Tree paths to the root as edge lists, built by BFS.
            let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.nodes];
            let mut seen = vec![false; self.nodes];
            let mut tree_edge = vec![false; n];
            seen[r] = true;
            let mut queue = VecDeque::from([r]);
            while let Some(u) = queue.pop_front() {
                for &(w, e) in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some((u, e));
                        tree_edge[e] = true;
                        queue.push_back(w);
                    }
                }
            }
            let path = |mut u: usize| {
                let mut v = BitVec::zeros(n);
                while let Some((p, e)) = parent[u] {
                    v.flip(e);
                    u = p;
                }
                v
            };
            for (e, ends) in self.ends.iter().enumerate() {
                let Some((u, w)) = *ends else { continue };
                if tree_edge[e] || !seen[u] {
                    continue;
                }
                let mut cyc = path(u);
                cyc.xor_assign(&path(w));
                cyc.flip(e);
                tried += 1;
                consider(cyc, &mut best);
            }
        }
        let best = best.expect("a nontrivial logical lies in the cycle space");
        SectorDistance {
            value: Some(best.count_ones()),
            status: if root.is_some() {
                DistanceStatus::UpperBound
            } else {
                DistanceStatus::Exact
            },
            certificate: Some(best.to_indices()),
            enumerated: tried,
        }
    }
}

/// Gray-code enumeration of l + s over nonzero logical combinations l and
/// stabilizers s, split into independent blocks for rayon.
fn enumerate(stabs: &BitMatrix, logicals: &[BitVec], budget: u64) -> SectorDistance {
    let mut e = Echelon::new(stabs.ncols());
    for r in stabs.rows() {
        e.insert(r.clone());
    }
    let gens: Vec<BitVec> = e.rows().to_vec();
    let k = logicals.len();
    let r = gens.len();
    let budget = budget.max(1);
    if k >= 40 || (1u64 << k) - 1 > budget {
        let best = logicals.iter().min_by_key(|l| l.count_ones()).unwrap();
        return SectorDistance {
            value: Some(best.count_ones()),
            status: DistanceStatus::UpperBound,
            certificate: Some(best.to_indices()),
            enumerated: k as u64,
        };
    }
    let classes = (1u64 << k) - 1;
    // Stabilizer bits that fit in the budget alongside all logical classes.
    let mut b = 0usize;
    while b < r && classes.saturating_mul(1u64 << (b + 1)) <= budget {
        b += 1;
    }
    let exact = b == r;
    let split = b.min(6);
    let low = b - split;
    let tasks: Vec<(u64, u64)> = (1..=classes)
        .flat_map(|l| (0..1u64 << split).map(move |blk| (l, blk)))
        .collect();
    let best = tasks
        .par_iter()
        .map(|&(l, blk)| {
            let mut cur = BitVec::zeros(stabs.ncols());
            for (i, lv) in logicals.iter().enumerate() {
                if l >> i & 1 == 1 {
                    cur.xor_assign(lv);
                }
            }
            for j in 0..split {
                if blk >> j & 1 == 1 {
                    cur.xor_assign(&gens[low + j]);
                }
            }
            let mut best_w = cur.count_ones();
            let mut best_step = 0u64;
            for step in 1..1u64 << low {
                cur.xor_assign(&gens[step.trailing_zeros() as usize]);
                let w = cur.count_ones();
                if w < best_w {
                    best_w = w;
                    best_step = step;
                }
            }
            (best_w, l, blk, best_step)
        })
        .min()
        .unwrap();
    let (w, l, blk, step) = best;
    let mut cert = BitVec::zeros(stabs.ncols());
    for (i, lv) in logicals.iter().enumerate() {
        if l >> i & 1 == 1 {
            cert.xor_assign(lv);
        }
    }
    for j in 0..split {
        if blk >> j & 1 == 1 {
            cert.xor_assign(&gens[low + j]);
        }
    }
    let gray = step ^ (step >> 1);
    for (j, g) in gens.iter().enumerate().take(low) {
        if gray >> j & 1 == 1 {
            cert.xor_assign(g);
        }
    }
    debug_assert_eq!(cert.count_ones(), w);
    SectorDistance {
        value: Some(w),
        status: if exact {
            DistanceStatus::Exact
        } else {
            DistanceStatus::UpperBound
        },
        certificate: Some(cert.to_indices()),
        enumerated: classes << b,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{toric_code, CssCode};
    use crate::complex::{barycentric_subdivide, build_sigma_g, build_torus3};
    use proptest::prelude::*;

    /// Brute force over all of ker(checks).
    fn brute(checks: &BitMatrix, dual: &[BitVec]) -> Option<usize> {
        let n = checks.ncols();
        (1u64..1 << n)
            .map(|m| BitVec::from_indices(n, (0..n).filter(|i| m >> i & 1 == 1)))
            .filter(|v| checks.mul_vec(v).is_zero() && dual.iter().any(|d| d.dot(v)))
            .map(|v| v.count_ones())
            .min()
    }

    #[test]
    fn t3_single_edge_loops() {
        let c = toric_code(&build_torus3(), 1).unwrap();
        let d = distance(&c, DistanceMethod::default());
        assert_eq!(d.d_z.value, Some(1));
        assert_eq!(d.d_z.status, DistanceStatus::Exact);
        assert_eq!(d.d_x.status, DistanceStatus::Exact);
    }

    #[test]
    fn subdivision_increases_dz() {
        let t = build_torus3();
        let before = distance_z(&toric_code(&t, 1).unwrap(), DistanceMethod::default());
        let sd = barycentric_subdivide(&t).complex;
        let after = distance_z(&toric_code(&sd, 1).unwrap(), DistanceMethod::default());
        assert_eq!(after.status, DistanceStatus::Exact);
        assert!(after.value.unwrap() > before.value.unwrap());
    }

    #[test]
    fn bfs_is_an_upper_bound() {
        let sd = barycentric_subdivide(&build_torus3()).complex;
        let c = toric_code(&sd, 1).unwrap();
        let exact = distance_z(&c, DistanceMethod::default()).value.unwrap();
        let bfs = distance_z(&c, DistanceMethod::SystoleBfs);
        assert_eq!(bfs.status, DistanceStatus::UpperBound);
        assert!(bfs.value.unwrap() >= exact);
    }

    #[test]
    fn zero_k_is_undefined() {
        let hx = BitMatrix::from_dense(&[vec![1, 1]]);
        let hz = BitMatrix::from_dense(&[vec![1, 1]]);
        let c = CssCode::from_checks(hx, hz).unwrap();
        let d = distance(&c, DistanceMethod::default());
        assert_eq!(d.d_x.status, DistanceStatus::Undefined);
        assert_eq!(d.d_z.describe(), "inf(undefined)");
    }

    #[test]
    fn surface_distances_match_brute_force() {
        let s = build_sigma_g(1).unwrap();
        let c = toric_code(&s, 1).unwrap();
        let d = distance(&c, DistanceMethod::default());
        assert_eq!(d.d_z.value, brute(&c.hx, &c.logical_x));
        assert_eq!(d.d_x.value, brute(&c.hz, &c.logical_z));
    }

    #[test]
    fn budget_exceeded_is_flagged() {
        let sd = barycentric_subdivide(&build_torus3()).complex;
        let c = toric_code(&sd, 1).unwrap();
        let d = distance(&c, DistanceMethod::Exact { budget: 1 << 12 });
        assert_eq!(d.d_x.status, DistanceStatus::UpperBound);
        let cert = BitVec::from_indices(c.n, d.d_x.certificate.unwrap());
        assert!(c.hz.mul_vec(&cert).is_zero());
        assert!(c.logical_z.iter().any(|z| z.dot(&cert)));
    }

    fn random_code(seed: &[bool], n: usize) -> Option<CssCode> {
        // hx random; hz from the kernel of hx so the checks commute.
        let rows: Vec<BitVec> = (0..2)
            .map(|r| BitVec::from_bools(&(0..n).map(|i| seed[(r * n + i) % seed.len()]).collect::<Vec<_>>()))
            .collect();
        let hx = BitMatrix::from_rows(n, rows);
        let ker = hx.kernel();
        let hz_rows: Vec<BitVec> = ker
            .iter()
            .enumerate()
            .filter(|(i, _)| seed[(i * 7 + 3) % seed.len()])
            .map(|(_, v)| v.clone())
            .collect();
        let hz = BitMatrix::from_rows(n, hz_rows);
        CssCode::from_checks(hx, hz).ok()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]

        #[test]
        fn enumeration_matches_brute_force(seed in proptest::collection::vec(any::<bool>(), 40), n in 4usize..10) {
            if let Some(c) = random_code(&seed, n) {
                prop_assume!(c.k() > 0);
                let d = distance(&c, DistanceMethod::default());
                prop_assert_eq!(d.d_x.value, brute(&c.hz, &c.logical_z));
                prop_assert_eq!(d.d_z.value, brute(&c.hx, &c.logical_x));
            }
        }

        #[test]
        fn distance_ignores_stabilizer_basis(seed in proptest::collection::vec(any::<bool>(), 40), mix in any::<u64>()) {
            if let Some(c) = random_code(&seed, 8) {
                prop_assume!(c.k() > 0 && c.hz.nrows() > 1);
                let mut mixed = c.clone();
                let rows: Vec<BitVec> = c.hz.rows().to_vec();
                let mut new_rows = rows.clone();
                for i in 0..rows.len() {
                    for (j, r) in rows.iter().enumerate() {
                        if i != j && (mix >> ((i * 5 + j) % 64)) & 1 == 1 {
                            new_rows[i].xor_assign(r);
                        }
                    }
                }
                // Keep the row space: append the originals.
                new_rows.extend(rows);
                mixed.hz = BitMatrix::from_rows(c.n, new_rows);
                let a = distance(&c, DistanceMethod::default());
                let b = distance(&mixed, DistanceMethod::default());
                prop_assert_eq!(a.d_x.value, b.d_x.value);
                prop_assert_eq!(a.d_z.value, b.d_z.value);
            }
        }
    }
}
