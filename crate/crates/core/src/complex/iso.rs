use super::{DeltaComplex, SimplicialMap};

#[derive(Clone)]
struct State {
    fwd: Vec<Vec<Option<usize>>>,
    bwd: Vec<Vec<Option<usize>>>,
}

impl State {
    fn bind(&mut self, a: &DeltaComplex, b: &DeltaComplex, n: usize, s: usize, t: usize) -> bool {
        match (self.fwd[n][s], self.bwd[n][t]) {
            (Some(x), _) => return x == t,
            (None, Some(_)) => return false,
            (None, None) => {}
        }
        self.fwd[n][s] = Some(t);
        self.bwd[n][t] = Some(s);
        if n == 0 {
            return true;
        }
        (0..=n).all(|i| self.bind(a, b, n - 1, a.face(n, s, i), b.face(n, t, i)))
    }
}

/// Searches for a dimension-preserving bijection between the simplices of
/// `a` and `b` that commutes with every face map.
///
/// Top simplices are matched by backtracking, propagating through shared
/// codimension-one faces; lower simplices are forced by the face maps.
pub fn find_isomorphism(a: &DeltaComplex, b: &DeltaComplex) -> Option<SimplicialMap> {
    if a.counts() != b.counts() {
        return None;
    }
    let n = a.dims();
    let state = State {
        fwd: a.counts().iter().map(|&c| vec![None; c]).collect(),
        bwd: b.counts().iter().map(|&c| vec![None; c]).collect(),
    };
    // cofaces[f] = (top simplex, slot) pairs in b
    let mut cofaces_b: Vec<Vec<(usize, usize)>> = vec![Vec::new(); if n == 0 { 0 } else { b.count(n - 1) }];
    if n > 0 {
        for t in 0..b.count(n) {
            for i in 0..=n {
                cofaces_b[b.face(n, t, i)].push((t, i));
            }
        }
    }
    let result = search(a, b, state, &cofaces_b)?;
    let perm: Vec<Vec<usize>> = result
        .fwd
        .into_iter()
        .map(|v| v.into_iter().collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()?;
    let map = SimplicialMap { perm };
    map.check_map(a, b).ok()?;
    Some(map)
}

fn search(a: &DeltaComplex, b: &DeltaComplex, state: State, cofaces_b: &[Vec<(usize, usize)>]) -> Option<State> {
    let n = a.dims();
    // Pick the first unassigned top simplex with an assigned face.
    let mut free = None;
    let mut constrained = None;
    for s in 0..a.count(n) {
        if state.fwd[n][s].is_some() {
            continue;
        }
        if free.is_none() {
            free = Some(s);
        }
        if n > 0 {
            if let Some(i) = (0..=n).find(|&i| state.fwd[n - 1][a.face(n, s, i)].is_some()) {
                constrained = Some((s, i));
                break;
            }
        }
    }
    let candidates: Vec<(usize, usize)> = match (constrained, free) {
        (Some((s, i)), _) => {
            let f = state.fwd[n - 1][a.face(n, s, i)].unwrap();
            cofaces_b[f]
                .iter()
                .filter(|&&(_, slot)| slot == i)
                .map(|&(t, _)| (s, t))
                .collect()
        }
        (None, Some(s)) => (0..b.count(n)).map(|t| (s, t)).collect(),
        (None, None) => {
            // All top simplices placed; place any leftover lower simplices.
            return finish_lower(a, b, state);
        }
    };
    for (s, t) in candidates {
        if state.bwd[n][t].is_some() {
            continue;
        }
        let mut next = state.clone();
        if next.bind(a, b, n, s, t) {
            if let Some(done) = search(a, b, next, cofaces_b) {
                return Some(done);
            }
        }
    }
    None
}

fn finish_lower(a: &DeltaComplex, b: &DeltaComplex, mut state: State) -> Option<State> {
    for d in (0..a.dims()).rev() {
        let free_a: Vec<usize> = (0..a.count(d)).filter(|&s| state.fwd[d][s].is_none()).collect();
        if free_a.is_empty() {
            continue;
        }
        let free_b: Vec<usize> = (0..b.count(d)).filter(|&t| state.bwd[d][t].is_none()).collect();
        // Non-pure complexes: match unplaced simplices greedily by faces.
        for s in free_a {
            let t = *free_b.iter().find(|&&t| {
                state.bwd[d][t].is_none() && {
                    let mut trial = state.clone();
                    trial.bind(a, b, d, s, t)
                }
            })?;
            let ok = state.bind(a, b, d, s, t);
            debug_assert!(ok);
        }
    }
    Some(state)
}
