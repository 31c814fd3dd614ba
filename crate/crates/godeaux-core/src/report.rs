//! Report documents: text tables mirroring the published layout, stable JSON
//! payloads, and DOT graphs for the Hasse diagrams.

use serde_json::{json, Value};

use crate::catalog::{Catalog, CatalogLabel};
use crate::config::CaseConfig;
use crate::error::{GodeauxError, Result};
use crate::group::{
    ambient_generators, ambient_group, CosetGroup, Group, GroupElement, TupleGroup,
};
use crate::inertia::{inertia_components, InertiaReport};
use crate::strat::{run_pipeline, EdgeKind, HasseDiagram, StratumTable};
use crate::TOOL_VERSION;

/// Everything computed for one torsion case.
pub struct Context {
    pub case: CaseConfig,
    pub catalog: Catalog,
    pub ambient_order: usize,
    pub table: StratumTable,
    pub diagram: HasseDiagram,
    pub inertia: InertiaReport,
}

impl Context {
    pub fn build(nu: u32) -> Result<Context> {
        let case = CaseConfig::builtin(nu)?;
        let catalog = Catalog::build()?;
        let (ambient_order, table, diagram, inertia) = {
            let ambient = ambient_group(&case)?;
            let ambient_order = ambient.len();
            let h = TupleGroup::new(&case, ambient);
            let quotient = CosetGroup::quotient(&case, &h)?;
            let pipe = run_pipeline(&case, &catalog, &quotient)?;
            let inertia = inertia_components(
                &case,
                &pipe.table,
                &pipe.components,
                &pipe.diagram,
                &quotient,
                &catalog,
            )?;
            (ambient_order, pipe.table, pipe.diagram, inertia)
        };
        Ok(Context {
            case,
            catalog,
            ambient_order,
            table,
            diagram,
            inertia,
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Table,
    Json,
    Dot,
}

impl std::str::FromStr for Format {
    type Err = GodeauxError;
    fn from_str(s: &str) -> Result<Format> {
        match s {
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            "dot" => Ok(Format::Dot),
            other => Err(GodeauxError::Parse(format!("unknown format {:?}", other))),
        }
    }
}

/// Top-level document wrapper; identical invocations serialize to identical
/// bytes.
pub struct ReportDocument {
    pub case: u32,
    pub kind: &'static str,
    pub payload: Value,
    pub config_digest: String,
}

impl ReportDocument {
    pub fn new(case: &CaseConfig, kind: &'static str, payload: Value) -> ReportDocument {
        ReportDocument {
            case: case.nu,
            kind,
            payload,
            config_digest: case.digest(),
        }
    }

    pub fn to_json(&self) -> String {
        let v = json!({
            "case": self.case,
            "kind": self.kind,
            "tool_version": TOOL_VERSION,
            "config_digest": self.config_digest,
            "payload": self.payload,
        });
        let mut s = serde_json::to_string_pretty(&v).expect("serializable");
        s.push('\n');
        s
    }
}

fn label_json(l: &CatalogLabel) -> Value {
    json!({ "order": l.order, "index": l.index, "name": l.name })
}

fn stratum_json(case: &CaseConfig, s: &crate::strat::Stratum) -> Value {
    let names = &case.mod_pars;
    let mut v = json!({
        "vanished": s.vanished.iter().map(|&v| names[v]).collect::<Vec<_>>(),
        "ratios": s.ratios.iter().map(|(&m, &(r, e))| json!({
            "src": names[m], "dst": names[r], "exp": e,
        })).collect::<Vec<_>>(),
    });
    if case.nu == 3 {
        // strata forcing a1 = a2 = 0 violate the nondegeneracy of the
        // parameters; the flag is reported rather than silently applied
        v["forces_a1_a2_zero"] = json!(case.forces_a1_a2_zero(&s.vanished));
    }
    v
}

/// The strata command: reproduce the stratification table.
pub fn cmd_strata(ctx: &Context, format: Format) -> Result<String> {
    match format {
        Format::Table => Ok(strata_table_text(ctx)),
        Format::Json => Ok(strata_json(ctx).to_json()),
        Format::Dot => Ok(strata_dot(ctx)),
    }
}

fn strata_table_text(ctx: &Context) -> String {
    let mut out = String::new();
    let case = &ctx.case;
    out.push_str(&format!(
        "Special subcomponents for torsion order {} (coefficient space dimension {})\n",
        case.nu,
        case.mod_pars.len()
    ));
    out.push_str(&format!(
        "{:<18} {:<9} {:<10} {:<4} {:<5} {:<4} equations\n",
        "group", "id", "strata", "dim", "comp", "bad"
    ));
    for row in &ctx.table.rows {
        for fam in &row.families {
            let eqs = fam.strata[0].stratum.conditions(&case.mod_pars).join(", ");
            out.push_str(&format!(
                "{:<18} {:<9} {:<10} {:<4} {:<5} {:<4} {}\n",
                row.label.name,
                row.label.id_string(),
                fam.family,
                fam.dim,
                fam.components,
                if fam.bad { "*" } else { "" },
                eqs
            ));
        }
    }
    out.push_str("\ncollapsed components:\n");
    for c in &ctx.diagram.nodes {
        out.push_str(&format!(
            "  {:<10} dim {:<2} {:<22} members [{}]{}\n",
            c.name,
            c.dim,
            c.label.to_string(),
            c.members.join(", "),
            if c.bad { " *" } else { "" }
        ));
    }
    out.push_str("\ncontainments (lower <= upper):\n");
    for (i, j, kind) in &ctx.diagram.edges {
        out.push_str(&format!(
            "  {} <= {}{}\n",
            ctx.diagram.nodes[*i].name,
            ctx.diagram.nodes[*j].name,
            if *kind == EdgeKind::QuotientOnly {
                "  (quotient only)"
            } else {
                ""
            }
        ));
    }
    out
}

fn strata_json(ctx: &Context) -> ReportDocument {
    let case = &ctx.case;
    let rows: Vec<Value> = ctx
        .table
        .rows
        .iter()
        .flat_map(|row| {
            row.families.iter().map(move |fam| {
                json!({
                    "label": label_json(&row.label),
                    "family": fam.family,
                    "dim": fam.dim,
                    "components": fam.components,
                    "bad": fam.bad,
                    "strata": fam.strata.iter().map(|s| {
                        let mut v = stratum_json(case, &s.stratum);
                        v["name"] = json!(s.name);
                        v["dim"] = json!(s.dim);
                        v
                    }).collect::<Vec<_>>(),
                })
            })
        })
        .collect();
    let collapsed: Vec<Value> = ctx
        .diagram
        .nodes
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "label": label_json(&c.label),
                "dim": c.dim,
                "bad": c.bad,
                "members": c.members,
            })
        })
        .collect();
    let edges: Vec<Value> = ctx
        .diagram
        .edges
        .iter()
        .map(|(i, j, kind)| {
            json!({
                "lower": ctx.diagram.nodes[*i].name,
                "upper": ctx.diagram.nodes[*j].name,
                "quotient_only": *kind == EdgeKind::QuotientOnly,
            })
        })
        .collect();
    ReportDocument::new(
        case,
        "strata",
        json!({ "rows": rows, "collapsed": collapsed, "hasse": edges }),
    )
}

fn strata_dot(ctx: &Context) -> String {
    let mut out = String::new();
    out.push_str(&format!("digraph godeaux_{} {{\n", ctx.case.nu));
    out.push_str("  rankdir=BT;\n  node [shape=ellipse];\n");
    for c in &ctx.diagram.nodes {
        out.push_str(&format!(
            "  \"{}\" [label=\"{}\\n(dim {}, {})\"{}];\n",
            c.name,
            c.name,
            c.dim,
            c.label.name,
            if c.bad { ", style=dotted" } else { "" }
        ));
    }
    for (i, j, kind) in &ctx.diagram.edges {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\"{};\n",
            ctx.diagram.nodes[*i].name,
            ctx.diagram.nodes[*j].name,
            if *kind == EdgeKind::QuotientOnly {
                " [style=dashed]"
            } else {
                ""
            }
        ));
    }
    out.push_str("}\n");
    out
}

/// The inertia command: component list, embedded groups, subcomponent tables.
pub fn cmd_inertia(ctx: &Context, format: Format) -> Result<String> {
    match format {
        Format::Table => Ok(inertia_table_text(ctx)),
        Format::Json => Ok(inertia_json(ctx).to_json()),
        Format::Dot => Err(GodeauxError::Parse("inertia has no dot format".into())),
    }
}

fn inertia_table_text(ctx: &Context) -> String {
    let rep = &ctx.inertia;
    let mut out = String::new();
    out.push_str(&format!(
        "Inertia components for torsion order {}: {} effective of {} raw (one per element of H/G)\n",
        rep.nu,
        rep.effective().count(),
        rep.components.len()
    ));
    if !rep.excluded.is_empty() {
        out.push_str(&format!(
            "families without a containment-compatible representative: {}\n",
            rep.excluded.join(", ")
        ));
    }
    out.push_str("\nembedded automorphism groups of the chosen representatives:\n");
    for c in &rep.chosen {
        out.push_str(&format!(
            "  Aut(S_{{{}}}) = <{}>  = {}{}\n",
            c.component,
            c.aut_gens
                .iter()
                .map(|g| g.display())
                .collect::<Vec<_>>()
                .join(", "),
            c.label,
            if c.bad { "  *" } else { "" }
        ));
    }
    out.push_str("\ncomponents (family, element) with centralizer:\n");
    for c in &rep.components {
        out.push_str(&format!(
            "  ({:<9} {:<10}) fixed {:<10} centralizer {:<28}{}\n",
            format!("{},", c.family),
            c.element.display(),
            c.fixed_name,
            format!("{} (order {})", c.centralizer.name, c.centralizer_order),
            if c.bad {
                " *excluded from the moduli space"
            } else {
                ""
            }
        ));
    }
    out.push_str("\nfamily histogram (effective): ");
    let hist = rep.family_histogram();
    out.push_str(
        &hist
            .iter()
            .map(|(k, v)| format!("{}:{}", k, v))
            .collect::<Vec<_>>()
            .join(" "),
    );
    out.push('\n');
    for sub in &rep.subreports {
        out.push_str(&format!(
            "\nsubcomponent groups inside the {} component family (group {}):\n",
            sub.family, sub.group
        ));
        for (fam, el, label, order) in &sub.rows {
            out.push_str(&format!(
                "  ({:<9} {:<10}) -> {} (order {})\n",
                format!("{},", fam),
                el.display(),
                label,
                order
            ));
        }
    }
    out
}

fn inertia_json(ctx: &Context) -> ReportDocument {
    let rep = &ctx.inertia;
    let case = &ctx.case;
    let components: Vec<Value> = rep
        .components
        .iter()
        .map(|c| {
            json!({
                "element": c.element.display(),
                "family": c.family,
                "assigned_stratum": c.assigned_stratum,
                "fixed_stratum": c.fixed_name,
                "fixed": stratum_json(case, &c.fixed),
                "centralizer": { "order": c.centralizer_order, "label": label_json(&c.centralizer) },
                "bad": c.bad,
            })
        })
        .collect();
    let chosen: Vec<Value> = rep
        .chosen
        .iter()
        .map(|c| {
            json!({
                "component": c.component,
                "stratum": c.name,
                "dim": c.dim,
                "bad": c.bad,
                "label": label_json(&c.label),
                "generators": c.aut_gens.iter().map(|g| g.display()).collect::<Vec<_>>(),
                "order": c.aut_reps.len(),
            })
        })
        .collect();
    let subreports: Vec<Value> = rep
        .subreports
        .iter()
        .map(|s| {
            json!({
                "family": s.family,
                "group": label_json(&s.group),
                "rows": s.rows.iter().map(|(fam, el, label, order)| json!({
                    "component": fam,
                    "element": el.display(),
                    "group": label_json(label),
                    "order": order,
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let hist: Value = rep
        .family_histogram()
        .into_iter()
        .map(|(k, v)| (k, json!(v)))
        .collect::<serde_json::Map<String, Value>>()
        .into();
    ReportDocument::new(
        case,
        "inertia",
        json!({
            "components": components,
            "chosen": chosen,
            "excluded": rep.excluded,
            "histogram": hist,
            "subreports": subreports,
            "raw_count": rep.components.len(),
            "effective_count": rep.effective().count(),
        }),
    )
}

/// The equations command: dump one twist's modular system.
pub fn cmd_equations(ctx: &Context, twist_unit: u32, format: Format) -> Result<String> {
    let case = &ctx.case;
    let h = case.twist_exponent(twist_unit)?;
    let eqs = case.equations_dictionary(h)?;
    match format {
        Format::Table => {
            let mut out = String::new();
            out.push_str(&format!(
                "Modular system for torsion order {}, twist {} (exponent {} of the generator {}):\n",
                case.nu, twist_unit, h, case.twist_unit
            ));
            for eq in &eqs {
                let prov = match (eq.provenance.target, eq.provenance.source) {
                    (Some(t), Some(s)) => format!(
                        "  [{}: {} <- {}]",
                        eq.provenance.relation, case.mod_pars[t], case.mod_pars[s]
                    ),
                    _ => format!("  [{}]", eq.provenance.relation),
                };
                out.push_str(&format!("  {}{}\n", eq.display(case), prov));
            }
            Ok(out)
        }
        Format::Json => {
            let payload: Vec<Value> = eqs
                .iter()
                .map(|eq| {
                    json!({
                        "display": eq.display(case),
                        "unknowns": eq.unknowns,
                        "ratios": eq.ratios.iter().map(|(rid, c)| json!({
                            "param": case.ratio_params[*rid].name, "coeff": c,
                        })).collect::<Vec<_>>(),
                        "konst": eq.konst,
                        "relation": eq.provenance.relation,
                        "target": eq.provenance.target.map(|t| case.mod_pars[t]),
                        "source": eq.provenance.source.map(|s| case.mod_pars[s]),
                    })
                })
                .collect();
            Ok(ReportDocument::new(
                case,
                "equations",
                json!({ "twist": twist_unit, "equations": payload }),
            )
            .to_json())
        }
        Format::Dot => Err(GodeauxError::Parse("equations have no dot format".into())),
    }
}

/// Curated structure names of the ambient groups.
fn ambient_structure(nu: u32) -> &'static str {
    match nu {
        5 => "Z_5^3 : Z_4",
        4 => "Z_4^3 : Z_2",
        3 => "S_3",
        _ => "?",
    }
}

/// The ambient command: orders and structure of H_nu and H_nu/G.
pub fn cmd_ambient(ctx: &Context, format: Format) -> Result<String> {
    let case = &ctx.case;
    let ambient = ambient_group(case)?;
    let h = TupleGroup::new(case, ambient);
    let quotient = CosetGroup::quotient(case, &h)?;
    let qlabel = ctx.catalog.identify(&quotient)?;
    let gens = ambient_generators(case);
    match format {
        Format::Table => {
            let mut out = String::new();
            out.push_str(&format!("Ambient group for torsion order {}:\n", case.nu));
            out.push_str(&format!(
                "  |H_{}| = {}  structure {}\n",
                case.nu,
                h.elems.len(),
                ambient_structure(case.nu)
            ));
            out.push_str(&format!(
                "  |H_{}/G| = {}  identified {}\n",
                case.nu,
                quotient.order(),
                qlabel
            ));
            out.push_str(&format!(
                "  generators: {}\n",
                gens.iter()
                    .map(|g| g.display())
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
            out.push_str(&format!(
                "  torsion generator: {}\n",
                GroupElement::new(case.nu, case.torsion_exps.clone(), 0).display()
            ));
            Ok(out)
        }
        Format::Json => Ok(ReportDocument::new(
            case,
            "ambient",
            json!({
                "order": h.elems.len(),
                "quotient_order": quotient.order(),
                "structure": ambient_structure(case.nu),
                "quotient_label": label_json(&qlabel),
                "generators": gens.iter().map(|g| g.display()).collect::<Vec<_>>(),
                "torsion_generator":
                    GroupElement::new(case.nu, case.torsion_exps.clone(), 0).display(),
            }),
        )
        .to_json()),
        Format::Dot => Err(GodeauxError::Parse("ambient has no dot format".into())),
    }
}

/// The config command: dump the case data driving the computation.
pub fn cmd_config(ctx: &Context, format: Format) -> Result<String> {
    let case = &ctx.case;
    let relations: Vec<Value> = case
        .relations
        .iter()
        .map(|rel| {
            json!({
                "name": rel.name,
                "terms": rel.terms.iter().map(|(f, mono)| json!({
                    "coefficient": f.display(&case.mod_pars),
                    "monomial": mono,
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let doc = ReportDocument::new(
        case,
        "config",
        json!({
            "nu": case.nu,
            "twist_generator": case.twist_unit,
            "twist_order": case.twist_order,
            "coordinates": case.coords.iter().map(|c| json!({
                "name": c.name, "weight": c.weight, "eigenspace": c.eigen,
            })).collect::<Vec<_>>(),
            "mod_pars": case.mod_pars,
            "unknowns": case.unknown_names,
            "candidate_diagonal": case.candidate_diag.iter().map(|f| {
                f.display(&case.unknown_names)
            }).collect::<Vec<_>>(),
            "ratio_params": case.ratio_params.iter().map(|r| json!({
                "name": r.name,
                "src": case.mod_pars[r.src],
                "dst": case.mod_pars[r.dst],
            })).collect::<Vec<_>>(),
            "relations": relations,
            "torsion_generator":
                GroupElement::new(case.nu, case.torsion_exps.clone(), 0).display(),
        }),
    );
    match format {
        Format::Json => Ok(doc.to_json()),
        Format::Table => Ok(doc.to_json()),
        Format::Dot => Err(GodeauxError::Parse("config has no dot format".into())),
    }
}

/// Parse `"(1,2,3,0);(0,0,0,1)"` into group elements of the case.
pub fn parse_generators(case: &CaseConfig, text: &str) -> Result<Vec<GroupElement>> {
    let mut out = Vec::new();
    let text = text.trim();
    if text.is_empty() {
        return Ok(out);
    }
    for part in text.split(';') {
        let part = part.trim();
        let inner = part
            .strip_prefix('(')
            .and_then(|p| p.strip_suffix(')'))
            .ok_or_else(|| GodeauxError::Parse(format!("expected (..) tuple, got {:?}", part)))?;
        let nums: Vec<i64> = inner
            .split(',')
            .map(|n| {
                n.trim()
                    .parse::<i64>()
                    .map_err(|_| GodeauxError::Parse(format!("bad integer in {:?}", part)))
            })
            .collect::<Result<_>>()?;
        if nums.len() != case.unknown_count() + 1 {
            return Err(GodeauxError::Parse(format!(
                "expected {} entries per tuple for torsion order {}, got {}",
                case.unknown_count() + 1,
                case.nu,
                nums.len()
            )));
        }
        let exps: Vec<u32> = nums[..nums.len() - 1]
            .iter()
            .map(|&v| v.rem_euclid(case.nu as i64) as u32)
            .collect();
        let h = nums[nums.len() - 1].rem_euclid(case.twist_order as i64) as u32;
        out.push(GroupElement::new(case.nu, exps, h));
    }
    Ok(out)
}

/// The group-id command: generate, quotient by the torsion group, identify.
pub fn cmd_group_id(ctx: &Context, gens_text: &str, format: Format) -> Result<String> {
    let case = &ctx.case;
    let mut gens = parse_generators(case, gens_text)?;
    // the torsion group is always included before quotienting
    gens.push(GroupElement::new(case.nu, case.torsion_exps.clone(), 0));
    let group = TupleGroup::from_generators(case, &gens)?;
    let quotient = CosetGroup::quotient(case, &group)?;
    let label = ctx.catalog.identify(&quotient)?;
    match format {
        Format::Table => {
            let mut out = String::new();
            out.push_str(&format!(
                "generated subgroup of H_{} (torsion included): order {}\n",
                case.nu,
                group.elems.len()
            ));
            out.push_str(&format!(
                "quotient by torsion: order {}\n",
                quotient.order()
            ));
            out.push_str(&format!("identified: {}\n", label));
            out.push_str(&format!(
                "coset representatives: {}\n",
                quotient
                    .reps
                    .iter()
                    .map(|g| g.display())
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
            Ok(out)
        }
        Format::Json => Ok(ReportDocument::new(
            case,
            "group-id",
            json!({
                "order": group.elems.len(),
                "quotient_order": quotient.order(),
                "label": label_json(&label),
                "elements": quotient.reps.iter().map(|g| g.display()).collect::<Vec<_>>(),
            }),
        )
        .to_json()),
        Format::Dot => Err(GodeauxError::Parse("group-id has no dot format".into())),
    }
}
