use super::{DeltaComplex, SimplicialMap};
use crate::gf2::BitVec;
use crate::{Error, Result};
use std::collections::HashMap;

/// One-vertex Δ-complex of T³: the ordered unit cube cut into the six
/// tetrahedra `[0, e_i, e_i+e_j, e_x+e_y+e_z]`, opposite faces identified.
pub fn build_torus3() -> DeltaComplex {
    build_torus3_grid(1)
}

/// Periodic L×L×L grid of ordered cubes, each split into six tetrahedra.
///
/// A k-simplex is a base point together with a strictly increasing chain of
/// k nonempty coordinate subsets; its vertices are the base point and the
/// base point shifted by each subset. Named cycles: the axis circles `a`, `b`,
/// `c` and the coordinate tori `axb`, `axc`, `bxc`.
pub fn build_torus3_grid(l: usize) -> DeltaComplex {
    assert!(l >= 1, "grid size must be positive");
    type Key = ([usize; 3], Vec<u8>);
    let chains = chains_by_length();
    let points: Vec<[usize; 3]> = (0..l)
        .flat_map(|x| (0..l).flat_map(move |y| (0..l).map(move |z| [x, y, z])))
        .collect();
    let mut index: Vec<HashMap<Key, usize>> = vec![HashMap::new(); 4];
    let mut keys: Vec<Vec<Key>> = vec![Vec::new(); 4];
    for k in 0..4 {
        for p in &points {
            for c in &chains[k] {
                index[k].insert((*p, c.clone()), keys[k].len());
                keys[k].push((*p, c.clone()));
            }
        }
    }
    let shift = |p: [usize; 3], mask: u8| {
        let mut q = p;
        for (axis, coord) in q.iter_mut().enumerate() {
            if mask & (1 << axis) != 0 {
                *coord = (*coord + 1) % l;
            }
        }
        q
    };
    let mut kx = DeltaComplex::new(3);
    kx.set_name("T3");
    let axis_name = ["a", "b", "c"];
    for (k, keys_k) in keys.iter().enumerate() {
        for (p, chain) in keys_k {
            let mut faces = Vec::new();
            if k > 0 {
                let first = chain[0];
                let rest: Vec<u8> = chain[1..].iter().map(|m| m & !first).collect();
                faces.push(index[k - 1][&(shift(*p, first), rest)]);
                for i in 1..=k {
                    let mut c = chain.clone();
                    c.remove(i - 1);
                    faces.push(index[k - 1][&(*p, c)]);
                }
            }
            let label = (k == 1 && chain[0].count_ones() == 1)
                .then(|| axis_name[chain[0].trailing_zeros() as usize].to_string());
            kx.push_simplex(k, &faces, label);
        }
    }
    for (axis, name) in axis_name.iter().enumerate() {
        let support = BitVec::from_indices(
            kx.count(1),
            (0..l).map(|t| {
                let mut p = [0; 3];
                p[axis] = t;
                index[1][&(p, vec![1u8 << axis])]
            }),
        );
        kx.add_cycle(1, *name, support);
    }
    for (a, b, name) in [(0usize, 1usize, "axb"), (0, 2, "axc"), (1, 2, "bxc")] {
        let fixed = 3 - a - b;
        let (ma, mb) = (1u8 << a, 1u8 << b);
        let support = BitVec::from_indices(
            kx.count(2),
            points
                .iter()
                .filter(|p| p[fixed] == 0)
                .flat_map(|p| [index[2][&(*p, vec![ma, ma | mb])], index[2][&(*p, vec![mb, ma | mb])]]),
        );
        kx.add_cycle(2, name, support);
    }
    kx
}

fn chains_by_length() -> Vec<Vec<Vec<u8>>> {
    let mut out: Vec<Vec<Vec<u8>>> = vec![vec![vec![]]];
    for k in 1..=3 {
        let mut next = Vec::new();
        for c in &out[k - 1] {
            let last = c.last().copied().unwrap_or(0);
            for m in 1u8..8 {
                if m & last == last && m != last {
                    let mut d = c.clone();
                    d.push(m);
                    next.push(d);
                }
            }
        }
        next.sort();
        out.push(next);
    }
    out
}

/// Letter `k` of the word a₁b₁a₁⁻¹b₁⁻¹⋯: (generator edge index, is_forward).
fn polygon_letter(k: usize) -> (usize, bool) {
    let h = k / 4;
    match k % 4 {
        0 => (2 * h, true),
        1 => (2 * h + 1, true),
        2 => (2 * h, false),
        _ => (2 * h + 1, false),
    }
}

fn generator_label(e: usize) -> String {
    let i = e / 2 + 1;
    if e % 2 == 0 {
        format!("a({i})")
    } else {
        format!("b({i})")
    }
}

/// One-vertex Δ-complex of the closed genus-g surface: the 4g-gon with word
/// a₁b₁a₁⁻¹b₁⁻¹⋯ fan-triangulated from corner 0.
///
/// Edges `0..2g` are the generators a(1), b(1), a(2), ...; the remaining
/// edges are fan diagonals. Named 1-cycles are the generator loops.
pub fn build_sigma_g(g: usize) -> Result<DeltaComplex> {
    if g == 0 {
        return Err(Error::ZeroGenus);
    }
    let sides = 4 * g;
    let mut k = DeltaComplex::new(2);
    k.set_name(format!("Sigma_{g}"));
    k.push_simplex(0, &[], None);
    for e in 0..2 * g {
        k.push_simplex(1, &[0, 0], Some(generator_label(e)));
    }
    // diag[j] is the edge from corner 0 to corner j.
    let mut diag = vec![usize::MAX; sides];
    diag[1] = 0;
    diag[sides - 1] = 2 * g - 1;
    for (j, d) in diag.iter_mut().enumerate().take(sides - 1).skip(2) {
        *d = k.push_simplex(1, &[0, 0], Some(format!("d{j}")));
    }
    for s in 1..sides - 1 {
        let (edge, forward) = polygon_letter(s);
        let faces = if forward {
            [edge, diag[s + 1], diag[s]]
        } else {
            [edge, diag[s], diag[s + 1]]
        };
        k.push_simplex(2, &faces, None);
    }
    for e in 0..2 * g {
        k.add_cycle(1, generator_label(e), BitVec::unit(k.count(1), e));
    }
    Ok(k)
}

/// Genus-g surface as a coned 4g-gon: corners are one vertex, the center is
/// another, and every polygon side spans a triangle with the center.
///
/// Rotating the polygon by four sides is a simplicial automorphism of order
/// g (see [`handle_rotation`]), which the fan model does not admit.
pub fn build_sigma_g_coned(g: usize) -> Result<DeltaComplex> {
    if g == 0 {
        return Err(Error::ZeroGenus);
    }
    let sides = 4 * g;
    let mut k = DeltaComplex::new(2);
    k.set_name(format!("Sigma_{g}"));
    k.push_simplex(0, &[], Some("corner".into()));
    k.push_simplex(0, &[], Some("center".into()));
    for e in 0..2 * g {
        k.push_simplex(1, &[0, 0], Some(generator_label(e)));
    }
    let spoke: Vec<usize> = (0..sides)
        .map(|j| k.push_simplex(1, &[1, 0], Some(format!("s{j}"))))
        .collect();
    for s in 0..sides {
        let (edge, forward) = polygon_letter(s);
        let next = (s + 1) % sides;
        let faces = if forward {
            [spoke[next], spoke[s], edge]
        } else {
            [spoke[s], spoke[next], edge]
        };
        k.push_simplex(2, &faces, None);
    }
    for e in 0..2 * g {
        k.add_cycle(1, generator_label(e), BitVec::unit(k.count(1), e));
    }
    Ok(k)
}

/// Rotation of [`build_sigma_g_coned`] by four polygon sides, sending handle
/// i to handle i+1 (mod g).
pub fn handle_rotation(g: usize) -> Result<SimplicialMap> {
    if g == 0 {
        return Err(Error::ZeroGenus);
    }
    let sides = 4 * g;
    let edges = (0..2 * g)
        .map(|e| (e + 2) % (2 * g))
        .chain((0..sides).map(|j| 2 * g + (j + 4) % sides))
        .collect();
    let tris = (0..sides).map(|s| (s + 4) % sides).collect();
    Ok(SimplicialMap {
        perm: vec![vec![0, 1], edges, tris],
    })
}

/// A circle with `n` vertices and `n` edges; named 1-cycle `c`.
pub fn circle(n: usize) -> DeltaComplex {
    assert!(n >= 1);
    let mut k = DeltaComplex::new(1);
    k.set_name("S1");
    for _ in 0..n {
        k.push_simplex(0, &[], None);
    }
    for i in 0..n {
        k.push_simplex(1, &[(i + 1) % n, i], Some("c".into()));
    }
    k.add_cycle(1, "c", BitVec::from_indices(n, 0..n));
    k
}

/// K × S¹ with `layers` prism layers.
pub fn product_with_circle(k: &DeltaComplex, layers: usize) -> Result<DeltaComplex> {
    let id = SimplicialMap::identity(k);
    circle_bundle(k, &id, layers)
}

/// Mapping torus of φ: `layers` prism layers over K with the top of the last
/// layer glued to the bottom of the first through φ.
pub fn mapping_torus(k: &DeltaComplex, phi: &SimplicialMap, layers: usize) -> Result<DeltaComplex> {
    circle_bundle(k, phi, layers)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Cell {
    // A copy of an n-simplex at a level.
    Level { n: usize, s: usize, level: usize },
    // (0,0)…(j,0)(j,1)…(n,1): an (n+1)-simplex of the prism over s.
    Prism { n: usize, s: usize, layer: usize, j: usize },
    // (0,0)…(j,0)(j+1,1)…(n,1): an interior n-simplex of the prism over s.
    Wall { n: usize, s: usize, layer: usize, j: usize },
}

fn circle_bundle(k: &DeltaComplex, phi: &SimplicialMap, layers: usize) -> Result<DeltaComplex> {
    if layers == 0 {
        return Err(Error::Invalid("layers must be positive".into()));
    }
    k.ensure_valid()?;
    phi.check_automorphism(k)?;
    let base_dim = k.dims();
    let dims = base_dim + 1;
    let mut cells: Vec<Vec<Cell>> = vec![Vec::new(); dims + 1];
    for (d, cells_d) in cells.iter_mut().enumerate() {
        if d <= base_dim {
            for level in 0..layers {
                for s in 0..k.count(d) {
                    cells_d.push(Cell::Level { n: d, s, level });
                }
            }
        }
        for layer in 0..layers {
            if d >= 1 && d <= base_dim {
                for s in 0..k.count(d) {
                    for j in 0..d {
                        cells_d.push(Cell::Wall { n: d, s, layer, j });
                    }
                }
            }
            if d >= 1 {
                for s in 0..k.count(d - 1) {
                    for j in 0..d {
                        cells_d.push(Cell::Prism { n: d - 1, s, layer, j });
                    }
                }
            }
        }
    }
    let index: Vec<HashMap<Cell, usize>> = cells
        .iter()
        .map(|v| v.iter().enumerate().map(|(i, c)| (*c, i)).collect())
        .collect();
    let top = |n: usize, s: usize, layer: usize| {
        if layer + 1 < layers {
            Cell::Level { n, s, level: layer + 1 }
        } else {
            Cell::Level {
                n,
                s: phi.apply(n, s),
                level: 0,
            }
        }
    };
    let faces_of = |c: Cell| -> Vec<Cell> {
        match c {
            Cell::Level { n, s, level } => (0..=n)
                .map(|i| Cell::Level {
                    n: n - 1,
                    s: k.face(n, s, i),
                    level,
                })
                .collect(),
            Cell::Prism { n, s, layer, j } => (0..=n + 1)
                .map(|t| {
                    if t < j {
                        Cell::Prism {
                            n: n - 1,
                            s: k.face(n, s, t),
                            layer,
                            j: j - 1,
                        }
                    } else if t == j {
                        if j == 0 {
                            top(n, s, layer)
                        } else {
                            Cell::Wall { n, s, layer, j: j - 1 }
                        }
                    } else if t == j + 1 {
                        if j == n {
                            Cell::Level { n, s, level: layer }
                        } else {
                            Cell::Wall { n, s, layer, j }
                        }
                    } else {
                        Cell::Prism {
                            n: n - 1,
                            s: k.face(n, s, t - 1),
                            layer,
                            j,
                        }
                    }
                })
                .collect(),
            Cell::Wall { n, s, layer, j } => (0..=n)
                .map(|t| {
                    let f = k.face(n, s, t);
                    if t <= j {
                        if j == 0 {
                            top(n - 1, f, layer)
                        } else {
                            Cell::Wall {
                                n: n - 1,
                                s: f,
                                layer,
                                j: j - 1,
                            }
                        }
                    } else if j == n - 1 {
                        Cell::Level {
                            n: n - 1,
                            s: f,
                            level: layer,
                        }
                    } else {
                        Cell::Wall {
                            n: n - 1,
                            s: f,
                            layer,
                            j,
                        }
                    }
                })
                .collect(),
        }
    };
    let mut out = DeltaComplex::new(dims);
    for (d, cells_d) in cells.iter().enumerate() {
        for c in cells_d {
            let faces: Vec<usize> = if d == 0 {
                Vec::new()
            } else {
                faces_of(*c).iter().map(|f| index[d - 1][f]).collect()
            };
            let label = match *c {
                Cell::Level { n, s, level: 0 } => k.label(n, s).map(str::to_string),
                Cell::Prism { n: 0, .. } => Some("c".to_string()),
                _ => None,
            };
            out.push_simplex(d, &faces, label);
        }
    }
    let fiber_name = k.name().unwrap_or("fiber").to_string();
    out.set_name(format!("{fiber_name}xS1"));
    out.add_cycle(
        base_dim,
        fiber_name,
        BitVec::from_indices(
            out.count(base_dim),
            (0..k.count(base_dim)).map(|s| {
                index[base_dim][&Cell::Level {
                    n: base_dim,
                    s,
                    level: 0,
                }]
            }),
        ),
    );
    for cyc in k.cycles() {
        let p = cyc.dim;
        out.add_cycle(
            p,
            cyc.label.clone(),
            BitVec::from_indices(
                out.count(p),
                cyc.support.ones().map(|s| index[p][&Cell::Level { n: p, s, level: 0 }]),
            ),
        );
    }
    for cyc in k.cycles() {
        let p = cyc.dim;
        if phi.apply_chain(p, &cyc.support, k.count(p)) != cyc.support {
            continue;
        }
        let support = BitVec::from_indices(
            out.count(p + 1),
            cyc.support.ones().flat_map(|s| {
                let index = &index;
                (0..layers)
                    .flat_map(move |layer| (0..=p).map(move |j| index[p + 1][&Cell::Prism { n: p, s, layer, j }]))
            }),
        );
        out.add_cycle(p + 1, format!("{}xc", cyc.label), support);
    }
    if k.count(0) > 0 && phi.apply(0, 0) == 0 && k.cycle("c").is_none() {
        out.add_cycle(
            1,
            "c",
            BitVec::from_indices(
                out.count(1),
                (0..layers).map(|layer| {
                    index[1][&Cell::Prism {
                        n: 0,
                        s: 0,
                        layer,
                        j: 0,
                    }]
                }),
            ),
        );
    }
    out.ensure_valid()?;
    Ok(out)
}

/// Extends prescribed edge values to a Z_m 1-cocycle by propagating the
/// cocycle condition ρ(v₁v₂) − ρ(v₀v₂) + ρ(v₀v₁) = 0 across triangles.
pub fn extend_cocycle_mod(k: &DeltaComplex, m: u64, prescribed: &[(usize, u64)]) -> Result<Vec<u64>> {
    let mut rho: Vec<Option<u64>> = vec![None; k.count(1)];
    for &(e, v) in prescribed {
        rho[e] = Some(v % m);
    }
    let tris = k.count(2);
    loop {
        let mut progress = false;
        for t in 0..tris {
            let f = k.faces_of(2, t);
            let vals = [rho[f[0]], rho[f[1]], rho[f[2]]];
            let known = vals.iter().filter(|v| v.is_some()).count();
            if known == 2 {
                let get = |i: usize| vals[i].unwrap_or(0);
                let (slot, value) = if vals[0].is_none() {
                    (0, (get(1) + m - get(2)) % m)
                } else if vals[1].is_none() {
                    (1, (get(0) + get(2)) % m)
                } else {
                    (2, (get(1) + m - get(0)) % m)
                };
                rho[f[slot]] = Some(value);
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    let rho: Vec<u64> = rho
        .into_iter()
        .enumerate()
        .map(|(e, v)| v.ok_or_else(|| Error::NoSolution(format!("edge {e} is not determined"))))
        .collect::<Result<_>>()?;
    for t in 0..tris {
        let f = k.faces_of(2, t);
        if (rho[f[0]] + rho[f[2]] + m - rho[f[1]]) % m != 0 {
            return Err(Error::NoSolution(format!("cocycle condition fails on triangle {t}")));
        }
    }
    Ok(rho)
}

/// An m-sheeted cyclic cover together with its deck transformation and
/// projection.
#[derive(Clone, Debug)]
pub struct CyclicCover {
    pub cover: DeltaComplex,
    pub sheets: u64,
    pub deck: SimplicialMap,
    pub projection: SimplicialMap,
}

/// The cyclic cover classified by a Z_m 1-cocycle ρ on the edges of K.
///
/// Simplex (σ, k) has faces (d_iσ, k) for i ≥ 1 and (d_0σ, k + ρ(v₀v₁)).
pub fn cyclic_cover(k: &DeltaComplex, m: u64, rho: &[u64]) -> Result<CyclicCover> {
    if m == 0 || rho.len() != k.count(1) {
        return Err(Error::Invalid("cocycle length or modulus".into()));
    }
    let sheets = m as usize;
    let id = |s: usize, sheet: usize| s * sheets + sheet;
    let mut out = DeltaComplex::new(k.dims());
    for n in 0..=k.dims() {
        for s in 0..k.count(n) {
            let lead = if n >= 1 { rho[k.edge(n, s, 0, 1)] as usize } else { 0 };
            for sheet in 0..sheets {
                let faces: Vec<usize> = (0..if n == 0 { 0 } else { n + 1 })
                    .map(|i| {
                        let f = k.face(n, s, i);
                        if i == 0 {
                            id(f, (sheet + lead) % sheets)
                        } else {
                            id(f, sheet)
                        }
                    })
                    .collect();
                out.push_simplex(n, &faces, k.label(n, s).map(|l| format!("{l}~{sheet}")));
            }
        }
    }
    out.set_name(format!("{}~{m}", k.name().unwrap_or("K")));
    out.ensure_valid()?;
    let deck = SimplicialMap {
        perm: (0..=k.dims())
            .map(|n| {
                (0..k.count(n))
                    .flat_map(|s| (0..sheets).map(move |sh| id(s, (sh + 1) % sheets)))
                    .collect()
            })
            .collect(),
    };
    let projection = SimplicialMap {
        perm: (0..=k.dims())
            .map(|n| (0..k.count(n)).flat_map(|s| std::iter::repeat_n(s, sheets)).collect())
            .collect(),
    };
    deck.check_automorphism(&out)?;
    projection.check_map(&out, k)?;
    Ok(CyclicCover {
        cover: out,
        sheets: m,
        deck,
        projection,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus3_counts_and_validity() {
        let t = build_torus3();
        assert_eq!(t.counts(), &[1, 7, 12, 6]);
        assert!(t.validate().is_valid());
        assert!(t.has_fundamental_cycle());
        assert_eq!(t.euler_characteristic(), 0);
        let labels: Vec<_> = (0..7).filter_map(|e| t.label(1, e)).collect();
        assert_eq!(labels, vec!["a", "b", "c"]);
    }

    #[test]
    fn torus3_grid_scales() {
        for l in 2..=3 {
            let t = build_torus3_grid(l);
            let v = l * l * l;
            assert_eq!(t.counts(), &[v, 7 * v, 12 * v, 6 * v]);
            assert!(t.validate().is_valid());
        }
    }

    #[test]
    fn sigma_g_shape() {
        for g in 1..=4 {
            let s = build_sigma_g(g).unwrap();
            assert_eq!(s.counts(), &[1, 6 * g - 3, 4 * g - 2]);
            assert!(s.validate().is_valid());
            assert!(s.has_fundamental_cycle());
            assert_eq!(s.euler_characteristic(), 2 - 2 * g as i64);
        }
        assert_eq!(build_sigma_g(0), Err(Error::ZeroGenus));
        let s3 = build_sigma_g(3).unwrap();
        let gens: Vec<_> = (0..6).map(|e| s3.label(1, e).unwrap().to_string()).collect();
        assert_eq!(gens, ["a(1)", "b(1)", "a(2)", "b(2)", "a(3)", "b(3)"]);
    }

    #[test]
    fn coned_surface_and_rotation() {
        for g in 1..=4 {
            let s = build_sigma_g_coned(g).unwrap();
            assert!(s.validate().is_valid());
            assert_eq!(s.euler_characteristic(), 2 - 2 * g as i64);
            let r = handle_rotation(g).unwrap();
            r.check_automorphism(&s).unwrap();
            assert!(r.power(g, &s).is_identity());
            if g > 1 {
                assert!(!r.power(g - 1, &s).is_identity());
            }
        }
    }

    #[test]
    fn product_counts() {
        let s = build_sigma_g(1).unwrap();
        let p = product_with_circle(&s, 1).unwrap();
        assert_eq!(p.counts(), &[1, 7, 12, 6]);
        assert!(p.has_fundamental_cycle());
        let point = {
            let mut k = DeltaComplex::new(0);
            k.push_simplex(0, &[], None);
            k
        };
        let c = product_with_circle(&point, 3).unwrap();
        assert_eq!(c.counts(), &[3, 3]);
        let labels: Vec<_> = (0..3).map(|e| c.label(1, e)).collect();
        assert!(labels.iter().all(|l| *l == Some("c")));
    }

    #[test]
    fn product_named_cycles() {
        let s = build_sigma_g(2).unwrap();
        let p = product_with_circle(&s, 2).unwrap();
        let names: Vec<_> = p.cycles().iter().map(|c| (c.dim, c.label.as_str())).collect();
        for want in [
            (2, "Sigma_2"),
            (1, "a(1)"),
            (1, "b(2)"),
            (2, "a(1)xc"),
            (2, "b(2)xc"),
            (1, "c"),
        ] {
            assert!(names.contains(&want), "missing {want:?} in {names:?}");
        }
    }

    #[test]
    fn rotation_mapping_torus_is_valid() {
        let s = build_sigma_g_coned(2).unwrap();
        let r = handle_rotation(2).unwrap();
        let m = mapping_torus(&s, &r, 1).unwrap();
        assert!(m.validate().is_valid());
        assert!(m.has_fundamental_cycle());
        // generator loops are moved by the rotation, so no a(i)xc is named
        assert!(m.cycle("a(1)xc").is_none());
        assert!(m.cycle("Sigma_2").is_some());
    }

    #[test]
    fn bad_twist_is_rejected() {
        let s = build_sigma_g(2).unwrap();
        let mut phi = SimplicialMap::identity(&s);
        phi.perm[1].swap(0, 1);
        assert!(mapping_torus(&s, &phi, 1).is_err());
    }

    #[test]
    fn cyclic_cover_of_genus_two() {
        let s = build_sigma_g(2).unwrap();
        let rho = extend_cocycle_mod(&s, 3, &[(0, 1), (1, 0), (2, 0), (3, 0)]).unwrap();
        let cov = cyclic_cover(&s, 3, &rho).unwrap();
        assert_eq!(cov.cover.euler_characteristic(), 3 * s.euler_characteristic());
        assert!(cov.deck.power(3, &cov.cover).is_identity());
        assert!(cov.cover.has_fundamental_cycle());
    }
}
