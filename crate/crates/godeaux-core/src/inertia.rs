//! Fixed strata of group elements acting on the coefficient space, and the
//! component decomposition of the inertia stack of the quotient.
//!
//! Components are indexed per element of H/G. Every element is assigned to
//! the largest chosen stratum whose automorphism group contains it, where the
//! chosen strata form one containment-compatible representative per collapsed
//! component. Families admitting no compatible representative (their
//! containments into the diagram hold only after orbit collapse) contribute no
//! chain position; their fixing elements fall through to smaller strata.

use std::collections::BTreeMap;

use crate::catalog::{Catalog, CatalogLabel};
use crate::config::CaseConfig;
use crate::error::{GodeauxError, Result};
use crate::group::{centralizer_indices, fingerprint, CosetGroup, Group, GroupElement, SubGroup};
use crate::strat::{
    classify, CollapsedComponent, HasseDiagram, NamedStratum, Stratum, StratumTable,
};

/// The maximal stratum fixed pointwise by a group element: coefficients it
/// scales nontrivially vanish, coefficients it permutes are linked by ratio
/// conditions with the matching exponents.
pub fn fixed_stratum(case: &CaseConfig, el: &GroupElement) -> Result<Stratum> {
    let action = case.param_action(el)?;
    let npars = case.mod_pars.len();
    let m = case.nu as i64;
    let mut vanished = std::collections::BTreeSet::new();
    let mut raw: Vec<(usize, usize, u32)> = Vec::new();
    let mut seen = vec![false; npars];
    for start in 0..npars {
        if seen[start] {
            continue;
        }
        // walk the cycle of the symbol permutation through `start`
        let mut cycle = vec![start];
        let mut exps = vec![action.map[start].1];
        let mut cur = action.map[start].0;
        while cur != start {
            cycle.push(cur);
            exps.push(action.map[cur].1);
            cur = action.map[cur].0;
        }
        for &c in &cycle {
            seen[c] = true;
        }
        let total: i64 = exps.iter().map(|&e| e as i64).sum();
        if total.rem_euclid(m) != 0 {
            // no nonzero fixed point on this cycle
            vanished.extend(cycle.iter().copied());
            continue;
        }
        if cycle.len() == 1 {
            continue; // fixed coefficient, stays free
        }
        // the action sends v_{cur} to slot next(cur) with scale xi^{e(cur)},
        // so a fixed point satisfies v_{next} = xi^{e(cur)} v_{cur}
        for i in 0..cycle.len() - 1 {
            raw.push((cycle[i + 1], cycle[i], exps[i]));
        }
    }
    Stratum::new(case.nu, npars, vanished, &raw)
}

/// One chosen representative stratum in the inertia chain.
#[derive(Clone, Debug)]
pub struct ChosenStratum {
    /// Collapsed component name, e.g. `T_{2,3}`.
    pub component: String,
    /// Name of the chosen member stratum, e.g. `T_2`.
    pub name: String,
    pub dim: usize,
    pub bad: bool,
    pub stratum: Stratum,
    /// Coset representatives of the automorphism group of the chosen stratum.
    pub aut_reps: Vec<GroupElement>,
    /// Small generating set of that group.
    pub aut_gens: Vec<GroupElement>,
    pub label: CatalogLabel,
}

/// One component of the inertia stack.
#[derive(Clone, Debug)]
pub struct InertiaComponent {
    /// Canonical coset representative in H/G.
    pub element: GroupElement,
    /// Collapsed component name of the assigned stratum.
    pub family: String,
    /// Name of the assigned chosen stratum.
    pub assigned_stratum: String,
    /// The element's maximal fixed stratum and its name among the table strata.
    pub fixed: Stratum,
    pub fixed_name: String,
    pub centralizer_order: usize,
    pub centralizer: CatalogLabel,
    /// The assigned stratum lies outside the moduli space.
    pub bad: bool,
}

/// Subcomponent analysis of one nonabelian stratum group: for each inertia
/// component meeting the stratum, the centralizer of its element intersected
/// with the stratum's automorphism group.
#[derive(Clone, Debug)]
pub struct SubcomponentReport {
    pub family: String,
    pub group: CatalogLabel,
    /// (component family, element, subgroup label, subgroup order)
    pub rows: Vec<(String, GroupElement, CatalogLabel, usize)>,
}

#[derive(Clone, Debug)]
pub struct InertiaReport {
    pub nu: u32,
    /// All components, one per element of H/G, bad ones included.
    pub components: Vec<InertiaComponent>,
    pub chosen: Vec<ChosenStratum>,
    /// Families with no containment-compatible representative.
    pub excluded: Vec<String>,
    pub subreports: Vec<SubcomponentReport>,
}

impl InertiaReport {
    /// Components on strata that belong to the moduli space.
    pub fn effective(&self) -> impl Iterator<Item = &InertiaComponent> {
        self.components.iter().filter(|c| !c.bad)
    }

    pub fn family_histogram(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for c in self.effective() {
            *out.entry(c.family.clone()).or_insert(0) += 1;
        }
        out
    }
}

/// The published representative choice, per collapsed component. `None` marks
/// a family proven incompatible with the containment chain (verified at run
/// time).
fn chosen_names(nu: u32) -> Vec<(&'static str, Option<&'static str>)> {
    match nu {
        5 => vec![
            ("O", Some("O")),
            ("H", Some("H_4")),
            ("P", Some("P_{0,0}")),
            ("Q", Some("Q_0")),
            ("affmod_5", Some("affmod_5")),
        ],
        4 => vec![
            ("O", Some("O")),
            ("T_1", Some("T_1")),
            ("T_{2,3}", Some("T_2")),
            ("T_4", None),
            ("S_1", Some("S_1")),
            ("S_{2,3}", Some("S_2")),
            ("S_4", Some("S_4")),
            ("S_5", Some("S_5")),
            ("S_6", Some("S_{6,0}")),
            ("S_7", Some("S_{7,0}")),
            ("R_5", None),
            ("R_4", Some("R_{4,0}")),
            ("R_{2,3}", Some("R_2")),
            ("W", Some("W_0")),
            ("R_1", Some("R_1")),
            ("affmod_4", Some("affmod_4")),
        ],
        3 => vec![("A", Some("A")), ("affmod_3", Some("affmod_3"))],
        _ => vec![],
    }
}

fn order_closure(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut leq = vec![vec![false; n]; n];
    for &(i, j) in edges {
        leq[i][j] = true;
    }
    for via in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][via] && leq[via][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    leq
}

/// Compute the full inertia decomposition.
pub fn inertia_components(
    case: &CaseConfig,
    table: &StratumTable,
    components: &[CollapsedComponent],
    diagram: &HasseDiagram,
    ambient_quotient: &CosetGroup,
    catalog: &Catalog,
) -> Result<InertiaReport> {
    let comp_index: BTreeMap<String, usize> = diagram
        .nodes
        .iter()
        .enumerate()
        .map(|(i, c)| (c.name.clone(), i))
        .collect();
    let strata: BTreeMap<String, &NamedStratum> =
        table.all_strata().map(|s| (s.name.clone(), s)).collect();

    // resolve the chosen representatives
    let mut chosen: Vec<ChosenStratum> = Vec::new();
    let mut excluded: Vec<String> = Vec::new();
    for (component, name) in chosen_names(case.nu) {
        let Some(&ci) = comp_index.get(component) else {
            return Err(GodeauxError::Internal(format!(
                "curated chain names a missing component {}",
                component
            )));
        };
        match name {
            None => excluded.push(component.to_string()),
            Some(name) => {
                let Some(s) = strata.get(name) else {
                    return Err(GodeauxError::Internal(format!(
                        "curated chain names a missing stratum {}",
                        name
                    )));
                };
                if !diagram.nodes[ci].members.contains(&s.name) {
                    return Err(GodeauxError::Internal(format!(
                        "{} is not a member of component {}",
                        name, component
                    )));
                }
                chosen.push(ChosenStratum {
                    component: component.to_string(),
                    name: s.name.clone(),
                    dim: s.dim,
                    bad: s.bad,
                    stratum: s.stratum.clone(),
                    aut_reps: s.aut_reps.clone(),
                    aut_gens: s.aut_gens.clone(),
                    label: s.label.clone(),
                });
            }
        }
    }
    if components.len() != chosen.len() + excluded.len() {
        return Err(GodeauxError::Internal(
            "curated chain does not cover the collapsed components".into(),
        ));
    }

    // containment compatibility of the chosen chain
    let n = diagram.nodes.len();
    let full_edges: Vec<(usize, usize)> = diagram.edges.iter().map(|&(i, j, _)| (i, j)).collect();
    let solid_edges: Vec<(usize, usize)> = diagram
        .edges
        .iter()
        .filter(|&&(_, _, k)| k == crate::strat::EdgeKind::Solid)
        .map(|&(i, j, _)| (i, j))
        .collect();
    let full_leq = order_closure(n, &full_edges);
    let solid_leq = order_closure(n, &solid_edges);
    let chosen_by_comp: BTreeMap<usize, &ChosenStratum> = chosen
        .iter()
        .map(|c| (comp_index[&c.component], c))
        .collect();
    for (&i, a) in &chosen_by_comp {
        for (&j, b) in &chosen_by_comp {
            if solid_leq[i][j] && !a.stratum.leq(&b.stratum) {
                return Err(GodeauxError::Internal(format!(
                    "chosen representatives violate containment: {} not inside {}",
                    a.name, b.name
                )));
            }
        }
    }
    // excluded families must indeed admit no compatible representative
    for name in &excluded {
        let ci = comp_index[name];
        let candidates = &diagram.nodes[ci].strata;
        let any_ok = candidates.iter().any(|f| {
            chosen_by_comp.iter().all(|(&j, b)| {
                let below_ok = !full_leq[j][ci] || b.stratum.leq(f);
                let above_ok = !full_leq[ci][j] || f.leq(&b.stratum);
                below_ok && above_ok
            })
        });
        if any_ok {
            return Err(GodeauxError::Internal(format!(
                "family {} was excluded from the chain but admits a compatible representative",
                name
            )));
        }
    }

    // assign every element of H/G to the largest chosen stratum fixing it
    let mut out_components: Vec<InertiaComponent> = Vec::new();
    for (idx, el) in ambient_quotient.reps.iter().enumerate() {
        let fixed = fixed_stratum(case, el)?;
        let (_, fixed_name) = classify(case, &fixed)?;
        let candidates: Vec<&ChosenStratum> =
            chosen.iter().filter(|c| c.stratum.leq(&fixed)).collect();
        let max_dim = candidates.iter().map(|c| c.dim).max().ok_or_else(|| {
            GodeauxError::Internal(format!("{} fixes no chosen stratum", el.display()))
        })?;
        let at_max: Vec<&&ChosenStratum> = candidates.iter().filter(|c| c.dim == max_dim).collect();
        if at_max.len() != 1 {
            return Err(GodeauxError::Internal(format!(
                "ambiguous assignment for {}: {:?}",
                el.display(),
                at_max.iter().map(|c| c.name.clone()).collect::<Vec<_>>()
            )));
        }
        let best: &ChosenStratum = at_max[0];
        let cen = centralizer_indices(ambient_quotient, idx);
        let sub = SubGroup::new(ambient_quotient, cen);
        let centralizer = identify_with_context(catalog, &sub)?;
        out_components.push(InertiaComponent {
            element: el.clone(),
            family: best.component.clone(),
            assigned_stratum: best.name.clone(),
            fixed,
            fixed_name,
            centralizer_order: sub.order(),
            centralizer,
            bad: best.bad,
        });
    }

    // subcomponent reports for every nonabelian component group
    let mut subreports = Vec::new();
    for c in &chosen {
        if c.bad {
            continue;
        }
        let aut_idx: Vec<usize> = c
            .aut_reps
            .iter()
            .map(|el| ambient_quotient.index_of(el))
            .collect::<Result<_>>()?;
        let aut_sub = SubGroup::new(ambient_quotient, aut_idx.clone());
        let abelian = (0..aut_sub.order())
            .all(|i| (0..aut_sub.order()).all(|j| aut_sub.mul(i, j) == aut_sub.mul(j, i)));
        if abelian {
            continue;
        }
        let mut rows = Vec::new();
        for el in &c.aut_reps {
            let gi = ambient_quotient.index_of(el)?;
            let cen = centralizer_indices(ambient_quotient, gi);
            let inter: Vec<usize> = cen.into_iter().filter(|i| aut_idx.contains(i)).collect();
            let sub = SubGroup::new(ambient_quotient, inter);
            let label = identify_with_context(catalog, &sub)?;
            let comp = out_components
                .iter()
                .find(|comp| comp.element == *el)
                .expect("every coset representative has a component");
            rows.push((comp.family.clone(), el.clone(), label, sub.order()));
        }
        subreports.push(SubcomponentReport {
            family: c.component.clone(),
            group: c.label.clone(),
            rows,
        });
    }

    Ok(InertiaReport {
        nu: case.nu,
        components: out_components,
        chosen,
        excluded,
        subreports,
    })
}

/// Identify against the catalog, reporting the fingerprint when a centralizer
/// type is missing so the gap is visible.
fn identify_with_context(catalog: &Catalog, g: &dyn Group) -> Result<CatalogLabel> {
    match catalog.identify(g) {
        Ok(l) => Ok(l),
        Err(GodeauxError::NoMatch(order)) => Err(GodeauxError::Internal(format!(
            "group of order {} missing from catalog: {:?}",
            order,
            fingerprint(g)
        ))),
        Err(e) => Err(e),
    }
}

/// Generator lists of the embedded automorphism groups of the chosen strata.
pub fn embedded_automorphism_groups(report: &InertiaReport) -> Vec<(String, Vec<GroupElement>)> {
    report
        .chosen
        .iter()
        .map(|c| (c.component.clone(), c.aut_gens.clone()))
        .collect()
}
