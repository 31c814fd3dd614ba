//! Arithmetic in the finite projective monomial-matrix groups `H_nu`, their
//! torsion quotients, centralizers, and isomorphism fingerprints.
//!
//! Elements are stored in tuple form: the diagonal exponents that are free in
//! the case's candidate shape, plus the twist exponent h of the fixed
//! generator of Z/nu^*. Projective equality is handled by normalizing the
//! embedded diagonal so the designated coordinate carries exponent zero.

use std::collections::{BTreeMap, BTreeSet};

use crate::config::CaseConfig;
use crate::error::{GodeauxError, Result};

/// A projective monomial matrix in tuple form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GroupElement {
    pub nu: u32,
    pub exps: Vec<u32>,
    pub h: u32,
}

impl GroupElement {
    pub fn new(nu: u32, exps: Vec<u32>, h: u32) -> Self {
        GroupElement { nu, exps, h }
    }

    pub fn identity(case: &CaseConfig) -> Self {
        GroupElement {
            nu: case.nu,
            exps: vec![0; case.unknown_count()],
            h: 0,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.h == 0 && self.exps.iter().all(|&e| e == 0)
    }

    /// Tuple display matching the tables: exponents then twist exponent.
    pub fn display(&self) -> String {
        let parts: Vec<String> = self
            .exps
            .iter()
            .map(|e| e.to_string())
            .chain(std::iter::once(self.h.to_string()))
            .collect();
        format!("({})", parts.join(","))
    }
}

/// A monomial matrix as diagonal xi-exponents plus a coordinate permutation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EmbeddedMatrix {
    pub diag: Vec<u32>,
    pub perm: Vec<usize>,
}

/// Embed a tuple element as diagonal exponents and coordinate permutation.
pub fn embed(case: &CaseConfig, el: &GroupElement) -> Result<EmbeddedMatrix> {
    if el.nu != case.nu {
        return Err(GodeauxError::CaseMismatch);
    }
    let diag: Vec<u32> = case
        .candidate_diag
        .iter()
        .map(|f| f.eval(&el.exps))
        .collect();
    Ok(EmbeddedMatrix {
        diag,
        perm: case.coord_perm(el.h),
    })
}

/// Reduce a diagonal exponent vector to the canonical representative modulo
/// the projective normalization lattice of the case.
pub fn normalize_diag(case: &CaseConfig, diag: &mut [u32]) {
    let nu = case.nu as i64;
    let sub = |diag: &mut [u32], anchor: usize, vector: &[u32]| {
        let t = diag[anchor] as i64;
        for (d, &v) in diag.iter_mut().zip(vector.iter()) {
            *d = ((*d as i64 - t * v as i64).rem_euclid(nu)) as u32;
        }
    };
    match case.nu {
        5 => sub(diag, 0, &[1, 1, 1, 1]),
        4 => sub(diag, 1, &[1, 1, 1, 2, 2]),
        3 => {
            // the scalar weight vector together with the parameter rescaling
            // direction allow zeroing both x1 and y2
            sub(diag, 4, &[0, 0, 1, 1, 1]);
            sub(diag, 0, &[1, 1, 0, 0, 0]);
        }
        _ => unreachable!(),
    }
}

/// Whether two embedded matrices represent the same projective transformation.
pub fn embedded_eq(case: &CaseConfig, a: &EmbeddedMatrix, b: &EmbeddedMatrix) -> bool {
    if a.perm != b.perm {
        return false;
    }
    let mut da = a.diag.clone();
    let mut db = b.diag.clone();
    normalize_diag(case, &mut da);
    normalize_diag(case, &mut db);
    da == db
}

/// Read the tuple back off a normalized diagonal.
fn unembed(case: &CaseConfig, diag: &[u32], h: u32) -> Result<GroupElement> {
    let nu = case.nu;
    let exps: Vec<u32> = match nu {
        5 => vec![diag[1], diag[2], diag[3]],
        4 => vec![diag[0], diag[2], diag[3]],
        3 => vec![diag[1]],
        _ => unreachable!(),
    };
    let el = GroupElement {
        nu,
        exps,
        h: h % case.twist_order,
    };
    let expect: Vec<u32> = case
        .candidate_diag
        .iter()
        .map(|f| f.eval(&el.exps))
        .collect();
    if expect != diag {
        return Err(GodeauxError::Internal(format!(
            "composite diagonal {:?} leaves the candidate shape",
            diag
        )));
    }
    Ok(el)
}

/// Group law: apply `b` first, then `a`. Diagonal exponents add after
/// permutation conjugation, permutations compose, and the result is
/// renormalized to the candidate shape.
pub fn multiply(case: &CaseConfig, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
    if a.nu != b.nu || a.nu != case.nu {
        return Err(GodeauxError::CaseMismatch);
    }
    let ea = embed(case, a)?;
    let eb = embed(case, b)?;
    let n = case.coords.len();
    let nu = case.nu as i64;
    // (a o b)(x_c) = a(xi^{Db(c)} x_{pb(c)}) = xi^{Db(c) + Da(pb(c))} x_{pa(pb(c))}
    let mut diag = vec![0u32; n];
    for c in 0..n {
        diag[c] = ((eb.diag[c] as i64 + ea.diag[eb.perm[c]] as i64).rem_euclid(nu)) as u32;
    }
    normalize_diag(case, &mut diag);
    unembed(case, &diag, a.h + b.h)
}

/// Multiplicative order of an element.
pub fn element_order(case: &CaseConfig, el: &GroupElement) -> Result<usize> {
    let mut acc = el.clone();
    let mut k = 1usize;
    while !acc.is_identity() {
        acc = multiply(case, el, &acc)?;
        k += 1;
        if k > 4 * case.nu as usize * case.nu as usize * case.nu as usize {
            return Err(GodeauxError::Internal("element order overflow".into()));
        }
    }
    Ok(k)
}

pub fn inverse(case: &CaseConfig, el: &GroupElement) -> Result<GroupElement> {
    let ord = element_order(case, el)?;
    let mut acc = GroupElement::identity(case);
    for _ in 0..ord - 1 {
        acc = multiply(case, &acc, el)?;
    }
    Ok(acc)
}

/// Closure of a generator list under multiplication and inverse.
pub fn generate(case: &CaseConfig, gens: &[GroupElement]) -> Result<Vec<GroupElement>> {
    let mut seen: BTreeSet<GroupElement> = BTreeSet::new();
    seen.insert(GroupElement::identity(case));
    let mut frontier: Vec<GroupElement> = vec![GroupElement::identity(case)];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = multiply(case, &x, g)?;
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    // closure under generators of a finite subset of a finite group is a group
    Ok(seen.into_iter().collect())
}

/// The torsion subgroup G as a sorted element list.
pub fn torsion_subgroup(case: &CaseConfig) -> Result<Vec<GroupElement>> {
    let gen = GroupElement::new(case.nu, case.torsion_exps.clone(), 0);
    generate(case, &[gen])
}

/// The standard generators of the full ambient group H_nu.
pub fn ambient_generators(case: &CaseConfig) -> Vec<GroupElement> {
    let mut gens = Vec::new();
    for i in 0..case.unknown_count() {
        let mut exps = vec![0u32; case.unknown_count()];
        exps[i] = 1;
        gens.push(GroupElement::new(case.nu, exps, 0));
    }
    gens.push(GroupElement::new(case.nu, vec![0; case.unknown_count()], 1));
    gens
}

/// The full ambient group H_nu.
pub fn ambient_group(case: &CaseConfig) -> Result<Vec<GroupElement>> {
    generate(case, &ambient_generators(case))
}

/// Abstract finite group interface used by fingerprinting and identification.
pub trait Group {
    fn order(&self) -> usize;
    fn mul(&self, i: usize, j: usize) -> usize;
    fn identity(&self) -> usize;
    fn label(&self, i: usize) -> String {
        format!("g{}", i)
    }
}

/// A subgroup of H_nu given by an explicit element list.
pub struct TupleGroup<'a> {
    pub case: &'a CaseConfig,
    pub elems: Vec<GroupElement>,
    index: BTreeMap<GroupElement, usize>,
}

impl<'a> TupleGroup<'a> {
    pub fn new(case: &'a CaseConfig, mut elems: Vec<GroupElement>) -> Self {
        elems.sort();
        elems.dedup();
        let index = elems
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        TupleGroup { case, elems, index }
    }

    pub fn from_generators(case: &'a CaseConfig, gens: &[GroupElement]) -> Result<Self> {
        Ok(TupleGroup::new(case, generate(case, gens)?))
    }

    pub fn contains(&self, el: &GroupElement) -> bool {
        self.index.contains_key(el)
    }
}

impl<'a> Group for TupleGroup<'a> {
    fn order(&self) -> usize {
        self.elems.len()
    }

    fn mul(&self, i: usize, j: usize) -> usize {
        let p = multiply(self.case, &self.elems[i], &self.elems[j])
            .expect("group elements share a case");
        *self
            .index
            .get(&p)
            .expect("group is closed under multiplication")
    }

    fn identity(&self) -> usize {
        *self
            .index
            .get(&GroupElement::identity(self.case))
            .expect("group contains the identity")
    }

    fn label(&self, i: usize) -> String {
        self.elems[i].display()
    }
}

/// A quotient of a subgroup of H_nu by the torsion group G, with
/// lexicographically least coset representatives.
pub struct CosetGroup<'a> {
    pub case: &'a CaseConfig,
    pub torsion: Vec<GroupElement>,
    pub reps: Vec<GroupElement>,
    index: BTreeMap<GroupElement, usize>,
}

impl<'a> CosetGroup<'a> {
    /// Quotient `group / G`; fails if G is not contained in the group.
    pub fn quotient(case: &'a CaseConfig, group: &TupleGroup<'a>) -> Result<Self> {
        let torsion = torsion_subgroup(case)?;
        for t in &torsion {
            if !group.contains(t) {
                return Err(GodeauxError::TorsionNotContained);
            }
        }
        let mut reps: BTreeSet<GroupElement> = BTreeSet::new();
        for el in &group.elems {
            reps.insert(canonical_rep(case, &torsion, el)?);
        }
        let reps: Vec<GroupElement> = reps.into_iter().collect();
        let index = reps
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        Ok(CosetGroup {
            case,
            torsion,
            reps,
            index,
        })
    }

    pub fn canon(&self, el: &GroupElement) -> Result<GroupElement> {
        canonical_rep(self.case, &self.torsion, el)
    }

    pub fn index_of(&self, el: &GroupElement) -> Result<usize> {
        let c = self.canon(el)?;
        self.index.get(&c).copied().ok_or(GodeauxError::NotInGroup)
    }

    pub fn contains(&self, el: &GroupElement) -> bool {
        self.index_of(el).is_ok()
    }

    /// A small generating set (greedy, deterministic).
    pub fn small_generating_set(&self) -> Result<Vec<GroupElement>> {
        let mut gens: Vec<GroupElement> = Vec::new();
        let mut span: BTreeSet<GroupElement> = BTreeSet::new();
        span.insert(self.canon(&GroupElement::identity(self.case))?);
        for el in &self.reps {
            if span.contains(el) {
                continue;
            }
            gens.push(el.clone());
            // regenerate the span
            let mut frontier: Vec<GroupElement> = span.iter().cloned().collect();
            while let Some(x) = frontier.pop() {
                for g in &gens {
                    let y = self.canon(&multiply(self.case, &x, g)?)?;
                    if span.insert(y.clone()) {
                        frontier.push(y);
                    }
                }
            }
            if span.len() == self.reps.len() {
                break;
            }
        }
        Ok(gens)
    }
}

/// Lexicographically least element of the coset el*G.
pub fn canonical_rep(
    case: &CaseConfig,
    torsion: &[GroupElement],
    el: &GroupElement,
) -> Result<GroupElement> {
    let mut best: Option<GroupElement> = None;
    for t in torsion {
        let p = multiply(case, el, t)?;
        if best.as_ref().is_none_or(|b| p < *b) {
            best = Some(p);
        }
    }
    Ok(best.unwrap())
}

impl<'a> Group for CosetGroup<'a> {
    fn order(&self) -> usize {
        self.reps.len()
    }

    fn mul(&self, i: usize, j: usize) -> usize {
        let p = multiply(self.case, &self.reps[i], &self.reps[j]).expect("same case");
        self.index_of(&p).expect("quotient group is closed")
    }

    fn identity(&self) -> usize {
        self.index_of(&GroupElement::identity(self.case))
            .expect("identity coset")
    }

    fn label(&self, i: usize) -> String {
        self.reps[i].display()
    }
}

/// Permutation-group models used for the small-group catalog.
pub struct PermGroup {
    pub elems: Vec<Vec<usize>>,
    index: BTreeMap<Vec<usize>, usize>,
}

impl PermGroup {
    pub fn from_generators(degree: usize, gens: &[Vec<usize>]) -> Self {
        let id: Vec<usize> = (0..degree).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        seen.insert(id.clone());
        let mut frontier = vec![id];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y: Vec<usize> = (0..degree).map(|i| g[x[i]]).collect();
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        let elems: Vec<Vec<usize>> = seen.into_iter().collect();
        let index = elems
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        PermGroup { elems, index }
    }

    /// Direct product acting on the disjoint union of the two domains.
    pub fn product(a: &PermGroup, b: &PermGroup) -> PermGroup {
        let da = a.elems[0].len();
        let db = b.elems[0].len();
        let mut elems = Vec::with_capacity(a.elems.len() * b.elems.len());
        for pa in &a.elems {
            for pb in &b.elems {
                let mut p = Vec::with_capacity(da + db);
                p.extend(pa.iter().copied());
                p.extend(pb.iter().map(|&x| x + da));
                elems.push(p);
            }
        }
        elems.sort();
        let index = elems
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        PermGroup { elems, index }
    }
}

impl Group for PermGroup {
    fn order(&self) -> usize {
        self.elems.len()
    }

    fn mul(&self, i: usize, j: usize) -> usize {
        let a = &self.elems[i];
        let b = &self.elems[j];
        let p: Vec<usize> = (0..a.len()).map(|k| a[b[k]]).collect();
        *self.index.get(&p).expect("closed")
    }

    fn identity(&self) -> usize {
        let id: Vec<usize> = (0..self.elems[0].len()).collect();
        *self.index.get(&id).expect("identity")
    }
}

/// Isomorphism-invariant fingerprint: order, element-order histogram, center
/// order, derived-subgroup order, abelianization invariant factors.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Fingerprint {
    pub order: usize,
    pub order_histogram: Vec<(usize, usize)>,
    pub center_order: usize,
    pub derived_order: usize,
    pub abelianization: Vec<usize>,
}

pub fn inverses(g: &dyn Group) -> Vec<usize> {
    let n = g.order();
    let e = g.identity();
    let mut inv = vec![usize::MAX; n];
    for i in 0..n {
        for j in 0..n {
            if g.mul(i, j) == e {
                inv[i] = j;
                break;
            }
        }
    }
    inv
}

pub fn element_orders(g: &dyn Group) -> Vec<usize> {
    let n = g.order();
    let e = g.identity();
    (0..n)
        .map(|i| {
            let mut acc = i;
            let mut k = 1;
            while acc != e {
                acc = g.mul(acc, i);
                k += 1;
            }
            k
        })
        .collect()
}

pub fn center_order(g: &dyn Group) -> usize {
    let n = g.order();
    (0..n)
        .filter(|&i| (0..n).all(|j| g.mul(i, j) == g.mul(j, i)))
        .count()
}

fn closure(g: &dyn Group, seed: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut seen = seed.clone();
    seen.insert(g.identity());
    let mut frontier: Vec<usize> = seen.iter().copied().collect();
    while let Some(x) = frontier.pop() {
        for s in seed.iter() {
            let y = g.mul(x, *s);
            if seen.insert(y) {
                frontier.push(y);
            }
        }
    }
    seen
}

pub fn derived_subgroup(g: &dyn Group) -> BTreeSet<usize> {
    let n = g.order();
    let inv = inverses(g);
    let mut comms = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            comms.insert(g.mul(g.mul(i, j), g.mul(inv[i], inv[j])));
        }
    }
    closure(g, &comms)
}

/// Invariant factors of a finite abelian group given its element orders.
fn abelian_invariants(orders: &[usize]) -> Vec<usize> {
    let n = orders.len();
    if n == 1 {
        return Vec::new();
    }
    let mut primes = Vec::new();
    let mut m = n;
    let mut p = 2usize;
    while m > 1 {
        if m.is_multiple_of(p) {
            primes.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    // per prime, recover the partition from the counts of elements of order
    // dividing p^k
    let mut partitions: Vec<Vec<u32>> = Vec::new();
    for &p in &primes {
        let mut s = vec![0usize];
        let mut k = 1u32;
        loop {
            let pk = (p as u64).pow(k);
            let count = orders
                .iter()
                .filter(|&&o| {
                    let o = o as u64;
                    // order divides p^k iff o is a power of p dividing p^k
                    pk.is_multiple_of(o) && is_prime_power(o, p as u64)
                })
                .count();
            let sk = (count as f64).log(p as f64).round() as usize;
            if sk == *s.last().unwrap() {
                break;
            }
            s.push(sk);
            k += 1;
        }
        let mut lambda = Vec::new();
        for k in 1..s.len() {
            let parts_ge_k = s[k] - s[k - 1];
            lambda.push(parts_ge_k as u32);
        }
        // lambda[k-1] = number of parts >= k; convert to the partition itself
        let mut partition = Vec::new();
        if !lambda.is_empty() {
            for i in 0..lambda[0] {
                let size = lambda.iter().filter(|&&c| c > i).count() as u32;
                partition.push(size);
            }
        }
        partition.sort_unstable_by(|a, b| b.cmp(a));
        partitions.push(partition);
    }
    let depth = partitions.iter().map(|p| p.len()).max().unwrap_or(0);
    let mut factors = Vec::new();
    for j in 0..depth {
        let mut d = 1u64;
        for (pi, &p) in primes.iter().enumerate() {
            if j < partitions[pi].len() {
                d *= (p as u64).pow(partitions[pi][j]);
            }
        }
        factors.push(d as usize);
    }
    factors.reverse(); // ascending, d1 | d2 | ...
    factors
}

fn is_prime_power(mut o: u64, p: u64) -> bool {
    if o == 1 {
        return true;
    }
    while o.is_multiple_of(p) {
        o /= p;
    }
    o == 1
}

pub fn fingerprint(g: &dyn Group) -> Fingerprint {
    let orders = element_orders(g);
    let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
    for &o in &orders {
        *hist.entry(o).or_insert(0) += 1;
    }
    let derived = derived_subgroup(g);
    // abelianization = quotient by the derived subgroup
    let ab_orders = quotient_element_orders(g, &derived);
    Fingerprint {
        order: g.order(),
        order_histogram: hist.into_iter().collect(),
        center_order: center_order(g),
        derived_order: derived.len(),
        abelianization: abelian_invariants(&ab_orders),
    }
}

/// Element orders of g modulo a normal subgroup.
fn quotient_element_orders(g: &dyn Group, normal: &BTreeSet<usize>) -> Vec<usize> {
    let n = g.order();
    // coset id: the least element of i*N
    let coset_id = |i: usize| -> usize { normal.iter().map(|&s| g.mul(i, s)).min().unwrap() };
    let mut reps: BTreeSet<usize> = BTreeSet::new();
    for i in 0..n {
        reps.insert(coset_id(i));
    }
    let e = coset_id(g.identity());
    reps.iter()
        .map(|&r| {
            let mut acc = r;
            let mut k = 1;
            while coset_id(acc) != e {
                acc = g.mul(acc, r);
                k += 1;
            }
            k
        })
        .collect()
}

/// Centralizer of element index `i` as a sorted index list.
pub fn centralizer_indices(g: &dyn Group, i: usize) -> Vec<usize> {
    (0..g.order())
        .filter(|&j| g.mul(i, j) == g.mul(j, i))
        .collect()
}

pub fn conjugacy_class(g: &dyn Group, i: usize) -> Vec<usize> {
    let inv = inverses(g);
    let mut class: BTreeSet<usize> = BTreeSet::new();
    for j in 0..g.order() {
        class.insert(g.mul(g.mul(j, i), inv[j]));
    }
    class.into_iter().collect()
}

/// A subgroup of an abstract group restricted to an index subset, with the
/// induced multiplication.
pub struct SubGroup<'g> {
    parent: &'g dyn Group,
    pub members: Vec<usize>,
    index: BTreeMap<usize, usize>,
}

impl<'g> SubGroup<'g> {
    pub fn new(parent: &'g dyn Group, mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        let index = members
            .iter()
            .copied()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        SubGroup {
            parent,
            members,
            index,
        }
    }
}

impl<'g> Group for SubGroup<'g> {
    fn order(&self) -> usize {
        self.members.len()
    }

    fn mul(&self, i: usize, j: usize) -> usize {
        let p = self.parent.mul(self.members[i], self.members[j]);
        *self
            .index
            .get(&p)
            .expect("subset is closed under multiplication")
    }

    fn identity(&self) -> usize {
        *self
            .index
            .get(&self.parent.identity())
            .expect("subgroup contains identity")
    }

    fn label(&self, i: usize) -> String {
        self.parent.label(self.members[i])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn case(nu: u32) -> CaseConfig {
        CaseConfig::builtin(nu).unwrap()
    }

    #[test]
    fn multiply_componentwise_for_diagonal_elements() {
        let c5 = case(5);
        let a = GroupElement::new(5, vec![1, 2, 3], 0);
        let p = multiply(&c5, &a, &a).unwrap();
        assert_eq!(p, GroupElement::new(5, vec![2, 4, 1], 0));
    }

    #[test]
    fn twist_exponents_add() {
        let c5 = case(5);
        let t = GroupElement::new(5, vec![0, 0, 0], 1);
        let p = multiply(&c5, &t, &t).unwrap();
        assert_eq!(p, GroupElement::new(5, vec![0, 0, 0], 2));
    }

    #[test]
    fn nu4_squares() {
        let c4 = case(4);
        let g = GroupElement::new(4, vec![1, 3, 1], 0);
        let p = multiply(&c4, &g, &g).unwrap();
        assert_eq!(p, GroupElement::new(4, vec![2, 2, 2], 0));
    }

    #[test]
    fn nu4_embed_matches_weighted_diagonal() {
        let c4 = case(4);
        let g = GroupElement::new(4, vec![1, 3, 1], 0);
        let e = embed(&c4, &g).unwrap();
        assert_eq!(e.diag, vec![1, 0, 3, 1, 3]);
        assert_eq!(e.perm, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn nu5_torsion_is_projectively_the_diagonal_action() {
        // (1,2,3;0) embeds as exponents (0,1,2,3), which is the scalar shift of
        // the torsion action diag(xi, xi^2, xi^3, xi^4)
        let c5 = case(5);
        let g = GroupElement::new(5, vec![1, 2, 3], 0);
        let e = embed(&c5, &g).unwrap();
        let mut rho = vec![1u32, 2, 3, 4];
        normalize_diag(&c5, &mut rho);
        assert_eq!(e.diag, rho);
    }

    #[test]
    fn ambient_orders() {
        assert_eq!(ambient_group(&case(5)).unwrap().len(), 500);
        assert_eq!(ambient_group(&case(4)).unwrap().len(), 128);
        assert_eq!(ambient_group(&case(3)).unwrap().len(), 6);
    }

    #[test]
    fn torsion_order_and_quotients() {
        for (nu, q) in [(5u32, 100usize), (4, 32), (3, 2)] {
            let c = case(nu);
            let t = torsion_subgroup(&c).unwrap();
            assert_eq!(t.len(), nu as usize);
            let h = TupleGroup::new(&c, ambient_group(&c).unwrap());
            let quot = CosetGroup::quotient(&c, &h).unwrap();
            assert_eq!(quot.order(), q);
        }
    }

    #[test]
    fn trivial_quotient_of_torsion_by_itself() {
        let c = case(5);
        let g = TupleGroup::new(&c, torsion_subgroup(&c).unwrap());
        let q = CosetGroup::quotient(&c, &g).unwrap();
        assert_eq!(q.order(), 1);
    }

    #[test]
    fn group_axioms_on_sampled_triples() {
        for nu in [3u32, 4, 5] {
            let c = case(nu);
            let all = ambient_group(&c).unwrap();
            let e = GroupElement::identity(&c);
            // deterministic sample of triples
            let n = all.len();
            let mut s = 0x9e3779b97f4a7c15u64;
            for _ in 0..1000 {
                s = s
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let i = (s >> 32) as usize % n;
                s = s
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let j = (s >> 32) as usize % n;
                s = s
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let k = (s >> 32) as usize % n;
                let (a, b, d) = (&all[i], &all[j], &all[k]);
                let ab_d = multiply(&c, &multiply(&c, a, b).unwrap(), d).unwrap();
                let a_bd = multiply(&c, a, &multiply(&c, b, d).unwrap()).unwrap();
                assert_eq!(ab_d, a_bd, "associativity");
                assert_eq!(multiply(&c, a, &e).unwrap(), *a);
                assert_eq!(multiply(&c, &e, a).unwrap(), *a);
                let ai = inverse(&c, a).unwrap();
                assert!(multiply(&c, a, &ai).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn embed_is_a_homomorphism_up_to_scalar_shift() {
        for nu in [3u32, 4, 5] {
            let c = case(nu);
            let all = ambient_group(&c).unwrap();
            let n = all.len();
            let mut s = 0xdeadbeefu64;
            let reps = if nu == 3 { n * n } else { 500 };
            for t in 0..reps {
                let (i, j) = if nu == 3 {
                    (t / n, t % n)
                } else {
                    s = s
                        .wrapping_mul(6364136223846793005)
                        .wrapping_add(1442695040888963407);
                    let i = (s >> 32) as usize % n;
                    s = s
                        .wrapping_mul(6364136223846793005)
                        .wrapping_add(1442695040888963407);
                    (i, (s >> 32) as usize % n)
                };
                let (a, b) = (&all[i], &all[j]);
                let prod = multiply(&c, a, b).unwrap();
                let ea = embed(&c, a).unwrap();
                let eb = embed(&c, b).unwrap();
                // compose embedded matrices directly
                let m = c.coords.len();
                let mut diag = vec![0u32; m];
                for k in 0..m {
                    diag[k] = ((eb.diag[k] as i64 + ea.diag[eb.perm[k]] as i64) % nu as i64) as u32;
                }
                let perm: Vec<usize> = (0..m).map(|k| ea.perm[eb.perm[k]]).collect();
                let direct = EmbeddedMatrix { diag, perm };
                let via_tuple = embed(&c, &prod).unwrap();
                assert!(embedded_eq(&c, &direct, &via_tuple));
            }
        }
    }

    #[test]
    fn class_equation_holds_for_ambient_quotients() {
        for nu in [3u32, 4, 5] {
            let c = case(nu);
            let h = TupleGroup::new(&c, ambient_group(&c).unwrap());
            let q = CosetGroup::quotient(&c, &h).unwrap();
            let n = q.order();
            let mut covered = std::collections::BTreeSet::new();
            let mut total = 0usize;
            for i in 0..n {
                if covered.contains(&i) {
                    continue;
                }
                let class = conjugacy_class(&q, i);
                let cen = centralizer_indices(&q, i);
                assert_eq!(class.len() * cen.len(), n, "orbit-stabilizer");
                total += class.len();
                covered.extend(class);
            }
            assert_eq!(total, n, "class equation");
        }
    }
}
