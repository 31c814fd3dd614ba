//! Stratification of the coefficient space: enumerate vanishing patterns and
//! ratio sub-strata, attach automorphism generators, propagate along
//! containment, regroup by identified group, collapse orbits under the ambient
//! group action, and build the Hasse diagram.

use std::collections::{BTreeMap, BTreeSet};

use crate::catalog::{Catalog, CatalogLabel};
use crate::config::{CaseConfig, CoeffAction};
use crate::error::{GodeauxError, Result};
use crate::group::{multiply, CosetGroup, GroupElement, TupleGroup};
use crate::psolve::ParamSystem;

/// A linear subspace of the coefficient space cut out by vanishing conditions
/// and root-of-unity ratio conditions between coefficients.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Stratum {
    pub modulus: u32,
    pub npars: usize,
    pub vanished: BTreeSet<usize>,
    /// Canonical ratio chains: member -> (root, exp) with member = root*xi^exp,
    /// the root being the least symbol of its linked class.
    pub ratios: BTreeMap<usize, (usize, u32)>,
}

impl Stratum {
    /// Build a stratum from raw ratio conditions `src = dst * xi^exp`.
    /// Inconsistent chains are rejected.
    pub fn new(
        modulus: u32,
        npars: usize,
        vanished: BTreeSet<usize>,
        raw_ratios: &[(usize, usize, u32)],
    ) -> Result<Stratum> {
        let m = modulus as i64;
        let mut parent: Vec<usize> = (0..npars).collect();
        let mut offset: Vec<i64> = vec![0; npars]; // x = parent * xi^offset
        fn find(parent: &mut Vec<usize>, offset: &mut Vec<i64>, x: usize, m: i64) -> (usize, i64) {
            if parent[x] == x {
                return (x, 0);
            }
            let (r, off) = find(parent, offset, parent[x], m);
            parent[x] = r;
            offset[x] = (offset[x] + off).rem_euclid(m);
            (r, offset[x])
        }
        for &(s, t, e) in raw_ratios {
            if vanished.contains(&s) || vanished.contains(&t) {
                return Err(GodeauxError::InconsistentRatios);
            }
            let (rs, os) = find(&mut parent, &mut offset, s, m);
            let (rt, ot) = find(&mut parent, &mut offset, t, m);
            if rs == rt {
                if (os - ot - e as i64).rem_euclid(m) != 0 {
                    return Err(GodeauxError::InconsistentRatios);
                }
            } else if rs < rt {
                // rt = rs * xi^{os - e - ot}
                parent[rt] = rs;
                offset[rt] = (os - e as i64 - ot).rem_euclid(m);
            } else {
                parent[rs] = rt;
                offset[rs] = (ot + e as i64 - os).rem_euclid(m);
            }
        }
        let mut ratios = BTreeMap::new();
        for x in 0..npars {
            if vanished.contains(&x) {
                continue;
            }
            let (r, off) = find(&mut parent, &mut offset, x, m);
            if r != x {
                ratios.insert(x, (r, off.rem_euclid(m) as u32));
            }
        }
        Ok(Stratum {
            modulus,
            npars,
            vanished,
            ratios,
        })
    }

    pub fn full(modulus: u32, npars: usize) -> Stratum {
        Stratum {
            modulus,
            npars,
            vanished: BTreeSet::new(),
            ratios: BTreeMap::new(),
        }
    }

    /// Parameters minus vanished minus independent ratio conditions.
    pub fn dimension(&self) -> usize {
        self.npars - self.vanished.len() - self.ratios.len()
    }

    /// Exponent e with x = y * xi^e, when x and y are linked and survive.
    pub fn ratio_of(&self, x: usize, y: usize) -> Option<u32> {
        if self.vanished.contains(&x) || self.vanished.contains(&y) {
            return None;
        }
        let resolve = |z: usize| -> (usize, u32) {
            match self.ratios.get(&z) {
                Some(&(r, e)) => (r, e),
                None => (z, 0),
            }
        };
        let (rx, ex) = resolve(x);
        let (ry, ey) = resolve(y);
        if rx != ry {
            return None;
        }
        Some(((ex as i64 - ey as i64).rem_euclid(self.modulus as i64)) as u32)
    }

    /// The linked classes (size >= 2) among surviving symbols.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (&member, &(root, _)) in &self.ratios {
            by_root.entry(root).or_default().push(member);
        }
        by_root
            .into_iter()
            .map(|(root, mut members)| {
                members.push(root);
                members.sort_unstable();
                members
            })
            .collect()
    }

    /// `self` is contained in `other`: every linear condition of `other` is
    /// implied by the conditions of `self`.
    pub fn leq(&self, other: &Stratum) -> bool {
        for v in &other.vanished {
            if !self.vanished.contains(v) {
                return false;
            }
        }
        for (&member, &(root, e)) in &other.ratios {
            let mv = self.vanished.contains(&member);
            let rv = self.vanished.contains(&root);
            if mv && rv {
                continue;
            }
            if mv != rv {
                return false;
            }
            match self.ratio_of(member, root) {
                Some(d) if d == e => {}
                _ => return false,
            }
        }
        true
    }

    /// Containment up to re-indexing of the ratio exponents of `other`: the
    /// vanishing conditions must hold and every linked class of `other` must
    /// be either fully vanished or fully linked in `self`.
    pub fn leq_shape(&self, other: &Stratum) -> bool {
        for v in &other.vanished {
            if !self.vanished.contains(v) {
                return false;
            }
        }
        for class in other.classes() {
            let vanished: Vec<bool> = class.iter().map(|s| self.vanished.contains(s)).collect();
            if vanished.iter().all(|&b| b) {
                continue;
            }
            if vanished.iter().any(|&b| b) {
                return false;
            }
            let root = class[0];
            for &s in &class[1..] {
                if self.ratio_of(s, root).is_none() {
                    return false;
                }
            }
        }
        true
    }

    /// Image of the stratum under a linear coefficient action.
    pub fn transform(&self, action: &CoeffAction) -> Result<Stratum> {
        let m = self.modulus as i64;
        let vanished: BTreeSet<usize> = self.vanished.iter().map(|&p| action.map[p].0).collect();
        let mut raw = Vec::new();
        for (&member, &(root, e)) in &self.ratios {
            let (dm, em) = action.map[member];
            let (dr, er) = action.map[root];
            // member = root*xi^e  =>  v'_{dm} = xi^{em + e - er} v'_{dr}
            raw.push((
                dm,
                dr,
                ((em as i64 + e as i64 - er as i64).rem_euclid(m)) as u32,
            ));
        }
        Stratum::new(self.modulus, self.npars, vanished, &raw)
    }

    /// Human-readable conditions, e.g. `b1 = 0, b3 = b2*xi^2`.
    pub fn conditions(&self, names: &[&str]) -> Vec<String> {
        let mut out: Vec<String> = self
            .vanished
            .iter()
            .map(|&v| format!("{} = 0", names[v]))
            .collect();
        for (&member, &(root, e)) in &self.ratios {
            if e == 0 {
                out.push(format!("{} = {}", names[member], names[root]));
            } else {
                out.push(format!("{} = {}*xi^{}", names[member], names[root], e));
            }
        }
        out
    }
}

/// A stratum together with the automorphism elements found on it.
#[derive(Clone, Debug)]
pub struct StratumAssignment {
    pub stratum: Stratum,
    pub elements: BTreeSet<GroupElement>,
}

/// Enumerate all vanishing patterns and twists, solve the modular systems, and
/// merge assignments on identical strata.
pub fn enumerate_strata(case: &CaseConfig) -> Result<Vec<StratumAssignment>> {
    let npars = case.mod_pars.len();
    let mut map: BTreeMap<Stratum, BTreeSet<GroupElement>> = BTreeMap::new();
    for h in 0..case.twist_order {
        for mask in 0u64..(1u64 << npars) {
            let Some(eqs) = case.collect_equations(mask, h)? else {
                continue;
            };
            let sys = ParamSystem::from_equations(case, &eqs);
            let sol = sys.solve();
            if sol.is_empty() {
                continue;
            }
            for pvals in sol.iter_pars_solutions()? {
                let xs = sol.solutions_at(&pvals)?;
                if xs.is_empty() {
                    continue;
                }
                let vanished: BTreeSet<usize> =
                    (0..npars).filter(|p| mask & (1u64 << p) != 0).collect();
                let raw: Vec<(usize, usize, u32)> = sys
                    .params
                    .iter()
                    .enumerate()
                    .map(|(i, &rid)| {
                        let rp = &case.ratio_params[rid];
                        (rp.src, rp.dst, pvals[i])
                    })
                    .collect();
                let stratum = Stratum::new(case.nu, npars, vanished, &raw)?;
                let entry = map.entry(stratum).or_default();
                for x in xs.enumerate()? {
                    entry.insert(GroupElement::new(case.nu, x, h));
                }
            }
        }
    }
    Ok(map
        .into_iter()
        .map(|(stratum, elements)| StratumAssignment { stratum, elements })
        .collect())
}

/// Propagate automorphisms of larger strata into every stratum they contain.
/// Containment is a partial order, so one pairwise pass reaches the fixed
/// point.
pub fn propagate(assignments: &mut [StratumAssignment]) {
    let n = assignments.len();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if assignments[i].stratum.leq(&assignments[j].stratum) {
                let extra: Vec<GroupElement> = assignments[j].elements.iter().cloned().collect();
                assignments[i].elements.extend(extra);
            }
        }
    }
}

/// Incremental closure of an element set under the group law.
pub fn closure_of(
    case: &CaseConfig,
    elements: &BTreeSet<GroupElement>,
) -> Result<Vec<GroupElement>> {
    let mut gens: Vec<GroupElement> = Vec::new();
    let mut span: BTreeSet<GroupElement> = BTreeSet::new();
    span.insert(GroupElement::identity(case));
    for el in elements {
        if span.contains(el) {
            continue;
        }
        gens.push(el.clone());
        let mut frontier: Vec<GroupElement> = span.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y = multiply(case, &x, g)?;
                if span.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
    }
    Ok(span.into_iter().collect())
}

/// A retained, named stratum of the final table.
#[derive(Clone, Debug)]
pub struct NamedStratum {
    pub family: String,
    pub name: String,
    pub stratum: Stratum,
    pub dim: usize,
    pub bad: bool,
    /// Order of the stabilizer before quotienting by the torsion group.
    pub full_order: usize,
    /// Canonical coset representatives of the automorphism group in H/G.
    pub aut_reps: Vec<GroupElement>,
    /// Small generating set (coset representatives).
    pub aut_gens: Vec<GroupElement>,
    pub label: CatalogLabel,
}

/// One stratum family inside a label-row.
#[derive(Clone, Debug)]
pub struct FamilyRow {
    pub family: String,
    pub dim: usize,
    pub components: usize,
    pub bad: bool,
    pub strata: Vec<NamedStratum>,
}

#[derive(Clone, Debug)]
pub struct TableRow {
    pub label: CatalogLabel,
    pub families: Vec<FamilyRow>,
}

#[derive(Clone, Debug)]
pub struct StratumTable {
    pub nu: u32,
    pub rows: Vec<TableRow>,
}

impl StratumTable {
    pub fn all_strata(&self) -> impl Iterator<Item = &NamedStratum> {
        self.rows
            .iter()
            .flat_map(|r| r.families.iter())
            .flat_map(|f| f.strata.iter())
    }

    pub fn find(&self, name: &str) -> Option<&NamedStratum> {
        self.all_strata().find(|s| s.name == name)
    }

    pub fn family_row(&self, family: &str) -> Option<&FamilyRow> {
        self.rows
            .iter()
            .flat_map(|r| r.families.iter())
            .find(|f| f.family == family)
    }
}

/// Curated bad-locus flags, keyed by family name: annotations recording which
/// strata contain no actual surfaces, not recomputed here.
pub fn bad_families(nu: u32) -> &'static [&'static str] {
    match nu {
        4 => &["S_1", "T_1", "O"],
        3 => &["A"],
        _ => &[],
    }
}

/// Regroup propagated assignments into the final table: identify every
/// stabilizer, drop strata contained in a larger stratum with the same label,
/// attach names and bad flags.
pub fn regroup(
    case: &CaseConfig,
    assignments: &[StratumAssignment],
    catalog: &Catalog,
) -> Result<StratumTable> {
    let mut labeled: Vec<(CatalogLabel, Vec<GroupElement>, Vec<GroupElement>, usize)> = Vec::new();
    for a in assignments.iter() {
        let full = closure_of(case, &a.elements)?;
        let full_order = full.len();
        let group = TupleGroup::new(case, full);
        let quot = CosetGroup::quotient(case, &group)?;
        let label = catalog.identify(&quot)?;
        let gens = quot.small_generating_set()?;
        labeled.push((label, quot.reps.clone(), gens, full_order));
    }
    // drop rule: contained in a different stratum with the same label
    let mut keep = vec![true; assignments.len()];
    for i in 0..assignments.len() {
        for j in 0..assignments.len() {
            if i == j || labeled[i].0 != labeled[j].0 {
                continue;
            }
            if assignments[i].stratum != assignments[j].stratum
                && assignments[i].stratum.leq(&assignments[j].stratum)
            {
                keep[i] = false;
            }
        }
    }
    let bad = bad_families(case.nu);
    let mut named: Vec<NamedStratum> = Vec::new();
    for (i, (label, reps, gens, full_order)) in labeled.iter().enumerate() {
        if !keep[i] {
            continue;
        }
        let stratum = assignments[i].stratum.clone();
        let (family, name) = classify(case, &stratum)?;
        named.push(NamedStratum {
            bad: bad.contains(&family.as_str()),
            dim: stratum.dimension(),
            family,
            name,
            stratum,
            full_order: *full_order,
            aut_reps: reps.clone(),
            aut_gens: gens.clone(),
            label: label.clone(),
        });
    }
    let mut by_label: BTreeMap<(usize, Option<u32>), Vec<NamedStratum>> = BTreeMap::new();
    for s in named {
        by_label
            .entry((s.label.order, s.label.index))
            .or_default()
            .push(s);
    }
    let mut rows: Vec<TableRow> = Vec::new();
    for (_, strata) in by_label {
        let label = strata[0].label.clone();
        let mut fams: BTreeMap<String, Vec<NamedStratum>> = BTreeMap::new();
        for s in strata {
            fams.entry(s.family.clone()).or_default().push(s);
        }
        let mut families: Vec<FamilyRow> = fams
            .into_iter()
            .map(|(family, mut strata)| {
                strata.sort_by(|a, b| a.name.cmp(&b.name));
                let dim = strata[0].dim;
                FamilyRow {
                    family,
                    dim,
                    components: strata.len(),
                    bad: strata[0].bad,
                    strata,
                }
            })
            .collect();
        families.sort_by(|a, b| b.dim.cmp(&a.dim).then(a.family.cmp(&b.family)));
        rows.push(TableRow { label, families });
    }
    rows.sort_by(|a, b| {
        let da = a.families.iter().map(|f| f.dim).max().unwrap_or(0);
        let db = b.families.iter().map(|f| f.dim).max().unwrap_or(0);
        db.cmp(&da)
            .then(a.label.order.cmp(&b.label.order))
            .then(a.label.index.cmp(&b.label.index))
    });
    Ok(StratumTable { nu: case.nu, rows })
}

/// Attach family and name of a retained stratum from its canonical form.
/// Names follow the documented index conventions; an unexpected shape is an
/// error, never silently renamed.
pub fn classify(case: &CaseConfig, s: &Stratum) -> Result<(String, String)> {
    let nu = case.nu;
    let classes = s.classes();
    let nv = s.vanished.len();
    let all: BTreeSet<usize> = (0..case.mod_pars.len()).collect();
    let err = || {
        GodeauxError::Internal(format!(
            "unrecognized stratum shape: vanished {:?}, classes {:?} (nu = {})",
            s.vanished,
            s.classes(),
            nu
        ))
    };
    let van = |list: &[usize]| -> BTreeSet<usize> { list.iter().copied().collect() };
    match nu {
        5 => {
            let (b1, b2, b3, b4, c1, c2, c3, c4) = (0, 1, 2, 3, 4, 5, 6, 7);
            if s.vanished == all {
                return Ok(("O".into(), "O".into()));
            }
            if nv == 0 && classes.is_empty() {
                return Ok(("affmod_5".into(), "affmod_5".into()));
            }
            if nv == 0 && classes.len() == 4 {
                let want = [vec![b1, b4], vec![b2, b3], vec![c1, c4], vec![c2, c3]];
                if classes == want {
                    let sx = s.ratio_of(b1, b4).ok_or_else(err)?;
                    if s.ratio_of(b3, b2) == Some((2 * sx) % 5)
                        && s.ratio_of(c1, c4) == Some((2 * sx) % 5)
                        && s.ratio_of(c3, c2) == Some((4 * sx) % 5)
                    {
                        return Ok(("Q".into(), format!("Q_{}", sx)));
                    }
                }
                return Err(err());
            }
            if nv == 0 && classes.len() == 2 {
                if classes == [vec![b1, b2, b3, b4], vec![c1, c2, c3, c4]] {
                    let sx = s.ratio_of(b2, b4).ok_or_else(err)?;
                    let st = s.ratio_of(b1, b2).ok_or_else(err)?;
                    let t = ((st as i64 - sx as i64).rem_euclid(5)) as u32;
                    return Ok(("P".into(), format!("P_{{{},{}}}", sx, t)));
                }
                return Err(err());
            }
            if nv == 6 && classes.is_empty() {
                for u in 0..4usize {
                    if !s.vanished.contains(&u) && !s.vanished.contains(&(u + 4)) {
                        return Ok(("H".into(), format!("H_{}", u + 1)));
                    }
                }
            }
            Err(err())
        }
        4 => {
            let (a, ap, b1, b3, c1, c3, d1, d3) = (0usize, 1, 2, 3, 4, 5, 6, 7);
            if s.vanished == all {
                return Ok(("O".into(), "O".into()));
            }
            if nv == 0 && classes.is_empty() {
                return Ok(("affmod_4".into(), "affmod_4".into()));
            }
            let bpair = vec![b1, b3];
            let cpair = vec![c1, c3];
            let dpair = vec![d1, d3];
            if nv == 0 && classes == [bpair.clone(), cpair.clone(), dpair.clone()] {
                let sx = s.ratio_of(b1, b3).ok_or_else(err)?;
                if s.ratio_of(c1, c3) == Some((2 * sx) % 4)
                    && s.ratio_of(d1, d3) == Some((2 * sx) % 4)
                {
                    return Ok(("W".into(), format!("W_{}", sx)));
                }
                return Err(err());
            }
            if s.vanished == van(&[b1, b3]) && classes.is_empty() {
                return Ok(("R_1".into(), "R_1".into()));
            }
            if s.vanished == van(&[ap, b3, c1, c3]) && classes.is_empty() {
                return Ok(("R_2".into(), "R_2".into()));
            }
            if s.vanished == van(&[ap, b1, c1, c3]) && classes.is_empty() {
                return Ok(("R_3".into(), "R_3".into()));
            }
            if s.vanished == van(&[b1, b3]) && classes == [cpair.clone(), dpair.clone()] {
                let e = s.ratio_of(c1, c3).ok_or_else(err)?;
                let f = s.ratio_of(d1, d3).ok_or_else(err)?;
                if e == f {
                    return Ok(("R_4".into(), format!("R_{{4,{}}}", e)));
                }
                return Err(err());
            }
            if s.vanished == van(&[ap, b1, b3]) && classes == [cpair.clone(), dpair.clone()] {
                let e = s.ratio_of(c1, c3).ok_or_else(err)?;
                let f = s.ratio_of(d1, d3).ok_or_else(err)?;
                if f == (e + 2) % 4 {
                    return Ok(("R_5".into(), format!("R_{{5,{}}}", e)));
                }
                return Err(err());
            }
            if s.vanished == van(&[ap, b1, b3, c1, c3]) && classes.is_empty() {
                return Ok(("S_5".into(), "S_5".into()));
            }
            if s.vanished == van(&[ap, b1, b3, d1, d3]) && classes.is_empty() {
                return Ok(("S_4".into(), "S_4".into()));
            }
            if s.vanished == van(&[a, ap, b3, c1, c3, d3]) && classes.is_empty() {
                return Ok(("S_2".into(), "S_2".into()));
            }
            if s.vanished == van(&[a, ap, b1, c1, c3, d1]) && classes.is_empty() {
                return Ok(("S_3".into(), "S_3".into()));
            }
            if s.vanished == van(&[ap, b1, b3, d1, d3]) && classes == [cpair.clone()] {
                let e = s.ratio_of(c1, c3).ok_or_else(err)?;
                return Ok(("S_6".into(), format!("S_{{6,{}}}", e)));
            }
            if s.vanished == van(&[a, ap, b1, b3, d1, d3]) && classes == [cpair.clone()] {
                let e = s.ratio_of(c1, c3).ok_or_else(err)?;
                return Ok(("T_4".into(), format!("T_{{4,{}}}", e)));
            }
            if s.vanished == van(&[a, ap, b1, b3, c1, c3, d3]) && classes.is_empty() {
                return Ok(("T_2".into(), "T_2".into()));
            }
            if s.vanished == van(&[a, ap, b1, b3, c1, c3, d1]) && classes.is_empty() {
                return Ok(("T_3".into(), "T_3".into()));
            }
            if s.vanished == van(&[b1, b3, c1, c3, d1, d3]) && classes.is_empty() {
                return Ok(("S_1".into(), "S_1".into()));
            }
            if s.vanished == van(&[ap, b1, b3, c1, c3]) && classes == [dpair.clone()] {
                let e = s.ratio_of(d1, d3).ok_or_else(err)?;
                return Ok(("S_7".into(), format!("S_{{7,{}}}", e)));
            }
            if s.vanished == van(&[ap, b1, b3, c1, c3, d1, d3]) && classes.is_empty() {
                return Ok(("T_1".into(), "T_1".into()));
            }
            Err(err())
        }
        3 => {
            if nv == 0 && classes.is_empty() {
                return Ok(("affmod_3".into(), "affmod_3".into()));
            }
            let (a1, a2, b1, b2, c1, c2, d1, d2) = (0, 1, 2, 4, 5, 6, 7, 8);
            if nv == 0
                && classes == [vec![a1, a2], vec![b1, b2], vec![c1, c2], vec![d1, d2]]
                && s.ratio_of(a1, a2) == Some(0)
                && s.ratio_of(b1, b2) == Some(0)
                && s.ratio_of(c1, c2) == Some(0)
                && s.ratio_of(d1, d2) == Some(0)
            {
                return Ok(("A".into(), "A".into()));
            }
            Err(err())
        }
        _ => Err(GodeauxError::UnsupportedTorsion(nu)),
    }
}

/// A component of the quotient: an orbit of strata under the ambient action.
#[derive(Clone, Debug)]
pub struct CollapsedComponent {
    pub name: String,
    pub families: Vec<String>,
    pub label: CatalogLabel,
    pub dim: usize,
    pub bad: bool,
    /// Names of the member strata.
    pub members: Vec<String>,
    pub strata: Vec<Stratum>,
}

/// Merge strata in one orbit of the ambient-group action into a single
/// component.
pub fn collapse_orbits(
    case: &CaseConfig,
    table: &StratumTable,
    ambient_quotient: &CosetGroup,
) -> Result<Vec<CollapsedComponent>> {
    let strata: Vec<&NamedStratum> = table.all_strata().collect();
    let index: BTreeMap<Stratum, usize> = strata
        .iter()
        .enumerate()
        .map(|(i, s)| (s.stratum.clone(), i))
        .collect();
    let actions: Vec<CoeffAction> = ambient_quotient
        .reps
        .iter()
        .map(|el| case.param_action(el))
        .collect::<Result<_>>()?;
    let mut orbit_id: Vec<Option<usize>> = vec![None; strata.len()];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for i in 0..strata.len() {
        if orbit_id[i].is_some() {
            continue;
        }
        let id = orbits.len();
        let mut members = vec![i];
        orbit_id[i] = Some(id);
        let mut frontier = vec![i];
        while let Some(j) = frontier.pop() {
            for act in &actions {
                let img = strata[j].stratum.transform(act)?;
                let Some(&k) = index.get(&img) else {
                    return Err(GodeauxError::Internal(format!(
                        "orbit of {} leaves the retained strata",
                        strata[j].name
                    )));
                };
                if orbit_id[k].is_none() {
                    orbit_id[k] = Some(id);
                    members.push(k);
                    frontier.push(k);
                }
            }
        }
        members.sort_unstable();
        orbits.push(members);
    }
    let mut out = Vec::new();
    for members in orbits {
        let label = strata[members[0]].label.clone();
        let dim = strata[members[0]].dim;
        for &m in &members {
            if strata[m].label != label || strata[m].dim != dim {
                return Err(GodeauxError::Internal(
                    "orbit mixes labels or dimensions".into(),
                ));
            }
        }
        let mut families: Vec<String> = members.iter().map(|&m| strata[m].family.clone()).collect();
        families.sort();
        families.dedup();
        let name = collapsed_name(&families)?;
        out.push(CollapsedComponent {
            name,
            bad: strata[members[0]].bad,
            label,
            dim,
            members: members.iter().map(|&m| strata[m].name.clone()).collect(),
            strata: members.iter().map(|&m| strata[m].stratum.clone()).collect(),
            families,
        });
    }
    out.sort_by(|a, b| b.dim.cmp(&a.dim).then(a.name.cmp(&b.name)));
    Ok(out)
}

fn collapsed_name(families: &[String]) -> Result<String> {
    match families {
        [one] => Ok(one.clone()),
        [x, y] if x == "R_2" && y == "R_3" => Ok("R_{2,3}".into()),
        [x, y] if x == "S_2" && y == "S_3" => Ok("S_{2,3}".into()),
        [x, y] if x == "T_2" && y == "T_3" => Ok("T_{2,3}".into()),
        _ => Err(GodeauxError::Internal(format!(
            "unexpected orbit collapse across families {:?}",
            families
        ))),
    }
}

/// Edge kind in the Hasse diagram.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EdgeKind {
    Solid,
    /// Containment realized only after orbit collapse, between re-indexed
    /// members of the families, not between the canonical representatives.
    QuotientOnly,
}

#[derive(Clone, Debug)]
pub struct HasseDiagram {
    pub nodes: Vec<CollapsedComponent>,
    /// (lower, upper, kind): the lower component is contained in the upper.
    pub edges: Vec<(usize, usize, EdgeKind)>,
}

/// Transitive reduction of the collapsed containment order, with
/// quotient-only edges for containments holding only up to re-indexing.
pub fn hasse(components: &[CollapsedComponent]) -> Result<HasseDiagram> {
    let n = components.len();
    let mut solid = vec![vec![false; n]; n];
    let mut order = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let set_leq = components[i]
                .strata
                .iter()
                .any(|a| components[j].strata.iter().any(|b| a.leq(b)));
            let shape_leq = set_leq
                || components[i]
                    .strata
                    .iter()
                    .any(|a| components[j].strata.iter().any(|b| a.leq_shape(b)));
            solid[i][j] = set_leq;
            order[i][j] = shape_leq;
        }
    }
    for via in 0..n {
        for i in 0..n {
            for j in 0..n {
                if order[i][via] && order[via][j] {
                    order[i][j] = true;
                }
                if solid[i][via] && solid[via][j] {
                    solid[i][j] = true;
                }
            }
        }
    }
    for i in 0..n {
        if order[i][i] {
            return Err(GodeauxError::Internal(
                "containment order has a cycle".into(),
            ));
        }
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if !order[i][j] {
                continue;
            }
            let covered = (0..n).any(|k| k != i && k != j && order[i][k] && order[k][j]);
            if !covered {
                let kind = if solid[i][j] {
                    EdgeKind::Solid
                } else {
                    EdgeKind::QuotientOnly
                };
                edges.push((i, j, kind));
            }
        }
    }
    edges.sort_by_key(|&(i, j, _)| (i, j));
    Ok(HasseDiagram {
        nodes: components.to_vec(),
        edges,
    })
}

/// Convenience: run the full stratification pipeline for one case.
pub struct Pipeline<'a> {
    pub case: &'a CaseConfig,
    pub assignments: Vec<StratumAssignment>,
    pub table: StratumTable,
    pub components: Vec<CollapsedComponent>,
    pub diagram: HasseDiagram,
}

pub fn run_pipeline<'a>(
    case: &'a CaseConfig,
    catalog: &Catalog,
    ambient_quotient: &CosetGroup,
) -> Result<Pipeline<'a>> {
    let mut assignments = enumerate_strata(case)?;
    propagate(&mut assignments);
    let table = regroup(case, &assignments, catalog)?;
    let components = collapse_orbits(case, &table, ambient_quotient)?;
    let diagram = hasse(&components)?;
    Ok(Pipeline {
        case,
        assignments,
        table,
        components,
        diagram,
    })
}
