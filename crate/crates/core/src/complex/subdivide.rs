use super::DeltaComplex;
use crate::gf2::BitVec;
use std::collections::HashMap;

/// Barycentric subdivision with its flag map back to the original cells.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub complex: DeltaComplex,
    /// `flags[n][τ]` lists the original cells `(dim, index)` whose
    /// barycenters are the vertices of the n-simplex τ, in vertex order.
    pub flags: Vec<Vec<Vec<(usize, usize)>>>,
}

impl Subdivision {
    /// Color (original cell dimension) of each subdivision vertex.
    pub fn vertex_colors(&self) -> Vec<usize> {
        self.flags[0].iter().map(|f| f[0].0).collect()
    }

    /// The cell chain of a top simplex.
    pub fn flag(&self, tau: usize) -> &[(usize, usize)] {
        &self.flags[self.complex.dims()][tau]
    }
}

fn compress(mask: u8, within: u8) -> u8 {
    let mut out = 0u8;
    let mut r = 0;
    for p in 0..8 {
        if within & (1 << p) != 0 {
            if mask & (1 << p) != 0 {
                out |= 1 << r;
            }
            r += 1;
        }
    }
    out
}

fn positions(mask: u8) -> Vec<usize> {
    (0..8).filter(|p| mask & (1 << p) != 0).collect()
}

/// Chains of proper nonempty subsets strictly increasing, followed by `full`.
fn chains_ending_at(full: u8) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<u8>> = vec![vec![full]];
    while let Some(chain) = stack.pop() {
        let first = chain[0];
        out.push(chain.clone());
        for m in 1..first {
            if m & first == m && m != first {
                let mut c = Vec::with_capacity(chain.len() + 1);
                c.push(m);
                c.extend_from_slice(&chain);
                stack.push(c);
            }
        }
    }
    out.sort();
    out
}

/// Barycentric subdivision of a Δ-complex.
///
/// An n-simplex of the subdivision is a cell σ of K together with a strictly
/// increasing chain P₀ ⊂ ⋯ ⊂ P_n of vertex-position sets of σ ending at all
/// of σ; its vertices are the barycenters of the faces of σ spanned by each
/// P_i. Named cycles are carried over as subdivided chains.
pub fn barycentric_subdivide(k: &DeltaComplex) -> Subdivision {
    let dims = k.dims();
    assert!(dims < 8, "dimension too large for subdivision");
    type Key = (usize, usize, Vec<u8>);
    let mut keys: Vec<Vec<Key>> = vec![Vec::new(); dims + 1];
    let templates: Vec<Vec<Vec<u8>>> = (0..=dims)
        .map(|d| chains_ending_at(((1u16 << (d + 1)) - 1) as u8))
        .collect();
    for d in 0..=dims {
        for s in 0..k.count(d) {
            for chain in &templates[d] {
                keys[chain.len() - 1].push((d, s, chain.clone()));
            }
        }
    }
    for ks in keys.iter_mut() {
        ks.sort();
    }
    let index: Vec<HashMap<Key, usize>> = keys
        .iter()
        .map(|ks| ks.iter().enumerate().map(|(i, key)| (key.clone(), i)).collect())
        .collect();
    let mut out = DeltaComplex::new(dims);
    let mut flags: Vec<Vec<Vec<(usize, usize)>>> = vec![Vec::new(); dims + 1];
    for (n, ks) in keys.iter().enumerate() {
        for (d, s, chain) in ks {
            let mut faces = Vec::new();
            if n > 0 {
                for i in 0..n {
                    let mut c = chain.clone();
                    c.remove(i);
                    faces.push(index[n - 1][&(*d, *s, c)]);
                }
                let within = chain[n - 1];
                let sub = k.sub_simplex(*d, *s, &positions(within));
                let c: Vec<u8> = chain[..n].iter().map(|&m| compress(m, within)).collect();
                faces.push(index[n - 1][&(within.count_ones() as usize - 1, sub, c)]);
            }
            let label = if n == 0 { Some(format!("v{d}:{s}")) } else { None };
            out.push_simplex(n, &faces, label);
            flags[n].push(
                chain
                    .iter()
                    .map(|&m| (m.count_ones() as usize - 1, k.sub_simplex(*d, *s, &positions(m))))
                    .collect(),
            );
        }
    }
    if let Some(name) = k.name() {
        out.set_name(format!("sd({name})"));
    }
    for cyc in k.cycles() {
        let p = cyc.dim;
        let support = BitVec::from_indices(
            out.count(p),
            keys[p]
                .iter()
                .enumerate()
                .filter(|(_, (d, s, _))| *d == p && cyc.support.get(*s))
                .map(|(i, _)| i),
        );
        out.add_cycle(p, cyc.label.clone(), support);
    }
    debug_assert!(out.validate().is_valid());
    Subdivision { complex: out, flags }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_sigma_g, build_torus3};

    #[test]
    fn chain_templates() {
        assert_eq!(chains_ending_at(0b1).len(), 1);
        assert_eq!(chains_ending_at(0b11).len(), 3);
        // ordered set partitions of 3 elements
        assert_eq!(chains_ending_at(0b111).len(), 13);
        assert_eq!(chains_ending_at(0b111).iter().filter(|c| c.len() == 3).count(), 6);
    }

    #[test]
    fn single_triangle() {
        let mut k = DeltaComplex::new(2);
        for _ in 0..3 {
            k.push_simplex(0, &[], None);
        }
        k.push_simplex(1, &[1, 0], None);
        k.push_simplex(1, &[2, 0], None);
        k.push_simplex(1, &[2, 1], None);
        k.push_simplex(2, &[2, 1, 0], None);
        let sd = barycentric_subdivide(&k);
        assert_eq!(sd.complex.counts(), &[7, 12, 6]);
        assert!(sd.complex.validate().is_valid());
    }

    #[test]
    fn torus3_flags() {
        let sd = barycentric_subdivide(&build_torus3());
        assert_eq!(sd.complex.counts(), &[26, 170, 288, 144]);
        assert!(sd.complex.validate().is_valid());
        let mut colors = sd.vertex_colors();
        colors.sort();
        colors.dedup();
        assert_eq!(colors, vec![0, 1, 2, 3]);
        for t in 0..144 {
            let dims: Vec<_> = sd.flag(t).iter().map(|c| c.0).collect();
            assert_eq!(dims, vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn named_cycles_survive() {
        let sd = barycentric_subdivide(&build_sigma_g(2).unwrap());
        assert!(sd.complex.validate().is_valid());
        let a1 = sd.complex.cycle("a(1)").unwrap();
        assert_eq!(a1.support.count_ones(), 2);
    }
}
