//! Finite groups given by multiplication tables, weighted Cayley graphs, and
//! the clique blowup that turns an integer-weighted Cayley graph into an
//! unweighted one.

use crate::graph::WeightedGraph;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    /// `mul[a * order + b] = a b`
    mul: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
    name: String,
}

impl GroupTable {
    /// Validates a multiplication table: Latin square with a two-sided
    /// identity. Associativity is checked for orders up to 64.
    pub fn from_table(order: usize, mul: Vec<usize>, name: impl Into<String>) -> Result<Self> {
        if order == 0 || mul.len() != order * order {
            return Err(Error::Validation("multiplication table has wrong size".into()));
        }
        if mul.iter().any(|&x| x >= order) {
            return Err(Error::Validation("multiplication table entry out of range".into()));
        }
        let mut seen = vec![false; order];
        for a in 0..order {
            seen.fill(false);
            for b in 0..order {
                let x = mul[a * order + b];
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::Validation(format!("row {a} repeats element {x}")));
                }
            }
        }
        for b in 0..order {
            seen.fill(false);
            for a in 0..order {
                let x = mul[a * order + b];
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::Validation(format!("column {b} repeats element {x}")));
                }
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| mul[e * order + a] == a && mul[a * order + e] == a))
            .ok_or_else(|| Error::Validation("table has no identity".into()))?;
        if order <= 64 {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        let left = mul[mul[a * order + b] * order + c];
                        let right = mul[a * order + mul[b * order + c]];
                        if left != right {
                            return Err(Error::Validation(format!("({a}{b}){c} != {a}({b}{c})")));
                        }
                    }
                }
            }
        }
        let inv = (0..order)
            .map(|a| (0..order).find(|&b| mul[a * order + b] == identity).unwrap())
            .collect();
        Ok(Self { order, mul, inv, identity, name: name.into() })
    }

    /// The cyclic group `Z_n` with element `k` at index `k`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Size("cyclic group of order 0".into()));
        }
        let mul = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        Self::from_table(n, mul, format!("Z_{n}"))
    }

    /// `Z_2^d` with element index equal to its bit string.
    pub fn elementary_abelian(d: u32) -> Result<Self> {
        if !(1..=12).contains(&d) {
            return Err(Error::Size(format!("Z_2^{d} outside supported range 1..=12")));
        }
        let n = 1usize << d;
        let mul = (0..n * n).map(|i| (i / n) ^ (i % n)).collect();
        Ok(Self { order: n, mul, inv: (0..n).collect(), identity: 0, name: format!("Z_2^{d}") })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }
}

/// Generators with positive weights, closed under inversion.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGeneratorSet {
    gens: Vec<(usize, f64)>,
}

impl WeightedGeneratorSet {
    pub fn new(group: &GroupTable, gens: Vec<(usize, f64)>) -> Result<Self> {
        for (i, &(g, w)) in gens.iter().enumerate() {
            if g >= group.order() {
                return Err(Error::Validation(format!("generator {g} is not a group element")));
            }
            if g == group.identity() {
                return Err(Error::Validation("identity cannot be a generator".into()));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::Validation(format!("generator {g} has weight {w}")));
            }
            if gens[..i].iter().any(|&(h, _)| h == g) {
                return Err(Error::Validation(format!("generator {g} listed twice")));
            }
        }
        for &(g, w) in &gens {
            let gi = group.inv(g);
            match gens.iter().find(|&&(h, _)| h == gi) {
                Some(&(_, wi)) if wi == w => {}
                Some(&(_, wi)) => {
                    return Err(Error::Validation(format!(
                        "generator {g} has weight {w} but its inverse {gi} has {wi}"
                    )))
                }
                None => {
                    return Err(Error::Validation(format!(
                        "generator set is not symmetric: inverse {gi} of {g} missing"
                    )))
                }
            }
        }
        Ok(Self { gens })
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.gens.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.gens.iter().map(|&(_, w)| w).sum()
    }

    /// Weights as integers, if they all are.
    pub fn integer_weights(&self) -> Option<Vec<(usize, u32)>> {
        self.gens
            .iter()
            .map(|&(g, w)| (w.fract() == 0.0 && w <= u32::MAX as f64).then_some((g, w as u32)))
            .collect()
    }
}

/// Cayley graph with edges `{u, u g}` of weight `w(g)`.
pub fn build_cayley(group: &GroupTable, gens: &WeightedGeneratorSet) -> Result<WeightedGraph> {
    let mut graph = WeightedGraph::new(group.order(), format!("cayley {} gens={}", group.name(), describe_gens(gens)));
    for u in 0..group.order() {
        for (g, w) in gens.iter() {
            let v = group.mul(u, g);
            // the edge {u, ug} is also {v, v g^-1}; add it from the smaller end
            if u < v {
                graph.add_edge(u, v, w)?;
            } else if u == v {
                unreachable!("identity is excluded from generators");
            }
        }
    }
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(graph)
}

fn describe_gens(gens: &WeightedGeneratorSet) -> String {
    gens.iter().map(|(g, w)| format!("{g}:{w}")).collect::<Vec<_>>().join(",")
}

/// Parameters of the clique blowup `G x Z_N`.
#[derive(Debug, Clone)]
pub struct BlowupParams {
    n: usize,
    group: GroupTable,
    gens: Vec<(usize, u32)>,
}

impl BlowupParams {
    /// Requires integer weights and `N >= 2 max_g w(g) + 2`.
    pub fn new(n: usize, group: GroupTable, gens: &WeightedGeneratorSet) -> Result<Self> {
        let int_gens = gens
            .integer_weights()
            .ok_or_else(|| Error::Validation("blowup requires integer generator weights".into()))?;
        let max_w = int_gens.iter().map(|&(_, w)| w as usize).max().unwrap_or(0);
        if n < 2 * max_w + 2 {
            return Err(Error::Validation(format!(
                "clique size {n} below simplicity guard 2*{max_w}+2"
            )));
        }
        for &(g, w) in &int_gens {
            if group.inv(g) == g && w % 2 == 1 && n % 2 == 1 {
                return Err(Error::Validation(format!(
                    "involution {g} with odd weight {w} needs an even clique size"
                )));
            }
        }
        Ok(Self { n, group, gens: int_gens })
    }

    pub fn clique_size(&self) -> usize {
        self.n
    }

    /// Degree of every blowup vertex, `N - 1 + sum_g w(g)`.
    pub fn degree(&self) -> usize {
        self.n - 1 + self.gens.iter().map(|&(_, w)| w as usize).sum::<usize>()
    }

    /// Index of `(u, i)` in the blowup.
    pub fn vertex(&self, u: usize, i: usize) -> usize {
        u * self.n + i
    }

    /// Inverse of [`BlowupParams::vertex`].
    pub fn coords(&self, x: usize) -> (usize, usize) {
        (x / self.n, x % self.n)
    }

    /// Offsets `j` of the matchings `(u, i) -- (u g, i + j)` contributed by
    /// generator `g`. A pair `{g, g^-1}` is represented once by its smaller
    /// index with offsets `1..=w`; seen from `u g` those edges carry offsets
    /// `-1..=-w`. An involution uses `+-1..=+-w/2` plus `N/2` when `w` is odd.
    fn offsets(&self, g: usize, w: u32) -> Vec<usize> {
        let n = self.n;
        let gi = self.group.inv(g);
        if gi == g {
            let half = (w / 2) as usize;
            let mut out: Vec<usize> = (1..=half).flat_map(|j| [j, n - j]).collect();
            if w % 2 == 1 {
                out.push(n / 2);
            }
            out
        } else if g < gi {
            (1..=w as usize).collect()
        } else {
            Vec::new()
        }
    }
}

/// Replaces each vertex of the Cayley graph by an `N`-clique and each edge of
/// integer weight `w(g)` by `w(g)` perfect matchings. All edges get weight
/// `1/deg(H)`.
pub fn clique_blowup(params: &BlowupParams) -> Result<WeightedGraph> {
    let n = params.n;
    let order = params.group.order();
    let w = 1.0 / params.degree() as f64;
    let mut h = WeightedGraph::new(
        order * n,
        format!(
            "blowup N={n} of {} gens={}",
            params.group.name(),
            params.gens.iter().map(|(g, w)| format!("{g}:{w}")).collect::<Vec<_>>().join(",")
        ),
    );
    for u in 0..order {
        for i in 0..n {
            for k in i + 1..n {
                h.add_edge(params.vertex(u, i), params.vertex(u, k), w)?;
            }
        }
    }
    for &(g, wg) in &params.gens {
        let offsets = params.offsets(g, wg);
        let involution = params.group.inv(g) == g;
        for u in 0..order {
            let ug = params.group.mul(u, g);
            // an involution's edge set is reached from both fibres; add once
            if involution && ug < u {
                continue;
            }
            for i in 0..n {
                for &j in &offsets {
                    h.add_edge(params.vertex(u, i), params.vertex(ug, (i + j) % n), w)?;
                }
            }
        }
    }
    if !h.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_hypercube;

    fn z6_blowup_gens(group: &GroupTable) -> WeightedGeneratorSet {
        WeightedGeneratorSet::new(group, vec![(1, 2.0), (5, 2.0), (2, 1.0), (4, 1.0)]).unwrap()
    }

    #[test]
    fn group_table_validation() {
        assert!(GroupTable::cyclic(7).is_ok());
        // not a Latin square
        assert!(GroupTable::from_table(2, vec![0, 1, 1, 1], "bad").is_err());
        // Latin square without identity: a*b = -(a+b) mod 3
        assert!(GroupTable::from_table(3, vec![0, 2, 1, 2, 1, 0, 1, 0, 2], "bad").is_err());
        // Z_2 with identity at index 1 is fine
        assert_eq!(GroupTable::from_table(2, vec![1, 0, 0, 1], "z2").unwrap().identity(), 1);
        let z4 = GroupTable::cyclic(4).unwrap();
        for g in 0..4 {
            assert_eq!(z4.mul(g, z4.inv(g)), z4.identity());
        }
    }

    #[test]
    fn cycle_from_cyclic_group() {
        let z6 = GroupTable::cyclic(6).unwrap();
        let gens = WeightedGeneratorSet::new(&z6, vec![(1, 1.0), (5, 1.0)]).unwrap();
        let g = build_cayley(&z6, &gens).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert!((0..6).all(|u| g.degree(u) == 2 && g.weight(u, (u + 1) % 6) == Some(1.0)));
    }

    #[test]
    fn asymmetric_generators_rejected() {
        let z4 = GroupTable::cyclic(4).unwrap();
        assert!(matches!(
            WeightedGeneratorSet::new(&z4, vec![(1, 1.0)]),
            Err(Error::Validation(_))
        ));
        assert!(WeightedGeneratorSet::new(&z4, vec![(1, 1.0), (3, 2.0)]).is_err());
        assert!(WeightedGeneratorSet::new(&z4, vec![(0, 1.0)]).is_err());
    }

    #[test]
    fn disconnected_cayley_rejected() {
        let z6 = GroupTable::cyclic(6).unwrap();
        let gens = WeightedGeneratorSet::new(&z6, vec![(2, 1.0), (4, 1.0)]).unwrap();
        assert!(matches!(build_cayley(&z6, &gens), Err(Error::Disconnected)));
    }

    #[test]
    fn elementary_abelian_matches_hypercube() {
        for d in 1..=5u32 {
            let group = GroupTable::elementary_abelian(d).unwrap();
            let w = 1.0 / d as f64;
            let gens = WeightedGeneratorSet::new(&group, (0..d).map(|i| (1usize << i, w)).collect()).unwrap();
            let cayley = build_cayley(&group, &gens).unwrap();
            assert_eq!(cayley.edges(), build_hypercube(d).unwrap().edges());
        }
    }

    #[test]
    fn cayley_graph_is_vertex_transitive() {
        let z6 = GroupTable::cyclic(6).unwrap();
        let gens = z6_blowup_gens(&z6);
        let g = build_cayley(&z6, &gens).unwrap();
        for h in 0..6 {
            for (u, v, w) in g.edges() {
                assert_eq!(g.weight(z6.mul(h, u), z6.mul(h, v)), Some(w));
            }
        }
    }

    #[test]
    fn blowup_degree_and_projection() {
        let z6 = GroupTable::cyclic(6).unwrap();
        let gens = z6_blowup_gens(&z6);
        let params = BlowupParams::new(16, z6.clone(), &gens).unwrap();
        assert_eq!(params.degree(), 21);
        let h = clique_blowup(&params).unwrap();
        assert_eq!(h.n(), 96);
        let wh = 1.0 / 21.0;
        for x in 0..h.n() {
            assert_eq!(h.degree(x), 21);
            let (u, _) = params.coords(x);
            let mut per_fibre = [0usize; 6];
            for &(y, w) in h.neighbors(x) {
                assert_eq!(w, wh);
                per_fibre[params.coords(y).0] += 1;
            }
            assert_eq!(per_fibre[u], 15);
            for (g, wg) in gens.iter() {
                assert_eq!(per_fibre[z6.mul(u, g)] as f64, wg);
            }
        }
    }

    #[test]
    fn blowup_with_involutions_is_regular() {
        // Z_2^2 with every weight odd or even, both parities of w
        let group = GroupTable::elementary_abelian(2).unwrap();
        let gens = WeightedGeneratorSet::new(&group, vec![(1, 3.0), (2, 2.0)]).unwrap();
        let params = BlowupParams::new(8, group.clone(), &gens).unwrap();
        let h = clique_blowup(&params).unwrap();
        assert!((0..h.n()).all(|x| h.degree(x) == params.degree()));
        assert_eq!(params.degree(), 7 + 5);
        for x in 0..h.n() {
            let (u, _) = params.coords(x);
            let to = |v: usize| h.neighbors(x).iter().filter(|&&(y, _)| params.coords(y).0 == v).count();
            assert_eq!(to(u ^ 1), 3);
            assert_eq!(to(u ^ 2), 2);
        }
        assert!(BlowupParams::new(9, group, &gens).is_err());
    }

    #[test]
    fn blowup_guards() {
        let z6 = GroupTable::cyclic(6).unwrap();
        let gens = z6_blowup_gens(&z6);
        assert!(matches!(BlowupParams::new(2, z6.clone(), &gens), Err(Error::Validation(_))));
        assert!(BlowupParams::new(5, z6.clone(), &gens).is_err());
        assert!(BlowupParams::new(6, z6.clone(), &gens).is_ok());
        let frac = WeightedGeneratorSet::new(&z6, vec![(1, 0.5), (5, 0.5)]).unwrap();
        assert!(matches!(BlowupParams::new(16, z6, &frac), Err(Error::Validation(_))));
    }
}
