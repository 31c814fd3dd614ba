//! The three torsion cases: coordinates, defining relations with parametric
//! coefficients, candidate automorphism shapes, coefficient coupling, and the
//! generation of the modular equation systems.
//!
//! A candidate automorphism acts by `x_c -> xi^{D(c)} x_{perm(c)}` where `D` is
//! a linear form in the case unknowns and `perm` is the coordinate permutation
//! induced by multiplying eigenspace indices by a unit `u`. Applying a
//! candidate to a relation and comparing coefficients monomial by monomial
//! yields linear congruences in the unknown exponents and the ratio
//! parameters; those systems drive the whole stratification.

use std::collections::BTreeMap;

use crate::error::{GodeauxError, Result};
use crate::group::GroupElement;

/// Linear form over the case unknowns, with constant term, coefficients mod nu.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UForm {
    pub modulus: u32,
    pub coeffs: Vec<u32>,
    pub konst: u32,
}

impl UForm {
    pub fn zero(modulus: u32, n: usize) -> Self {
        UForm {
            modulus,
            coeffs: vec![0; n],
            konst: 0,
        }
    }

    pub fn from_coeffs(modulus: u32, coeffs: &[i64]) -> Self {
        let m = modulus as i64;
        UForm {
            modulus,
            coeffs: coeffs.iter().map(|&c| c.rem_euclid(m) as u32).collect(),
            konst: 0,
        }
    }

    pub fn add_scaled(&mut self, other: &UForm, k: i64) {
        let m = self.modulus as i64;
        for (a, &b) in self.coeffs.iter_mut().zip(other.coeffs.iter()) {
            *a = ((*a as i64 + k * b as i64).rem_euclid(m)) as u32;
        }
        self.konst = ((self.konst as i64 + k * other.konst as i64).rem_euclid(m)) as u32;
    }

    pub fn sub(&self, other: &UForm) -> UForm {
        let mut r = self.clone();
        r.add_scaled(other, -1);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.konst == 0 && self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn eval(&self, xs: &[u32]) -> u32 {
        let m = self.modulus as i64;
        let mut acc = self.konst as i64;
        for (c, &x) in self.coeffs.iter().zip(xs.iter()) {
            acc += *c as i64 * x as i64;
        }
        acc.rem_euclid(m) as u32
    }

    pub fn display(&self, names: &[&str]) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if c == 1 {
                parts.push(names[i].to_string());
            } else {
                parts.push(format!("{}*{}", c, names[i]));
            }
        }
        if self.konst != 0 || parts.is_empty() {
            parts.push(format!("{}", self.konst));
        }
        parts.join(" + ")
    }
}

/// Integer-linear coefficient form in the moduli parameters, e.g. `-b1 - b12 + d2`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CoeffForm {
    pub konst: i64,
    pub syms: BTreeMap<usize, i64>,
}

impl CoeffForm {
    pub fn constant(k: i64) -> Self {
        CoeffForm {
            konst: k,
            syms: BTreeMap::new(),
        }
    }

    pub fn sym(s: usize, g: i64) -> Self {
        let mut f = CoeffForm::default();
        f.syms.insert(s, g);
        f
    }

    pub fn plus(mut self, s: usize, g: i64) -> Self {
        *self.syms.entry(s).or_insert(0) += g;
        self.syms.retain(|_, v| *v != 0);
        self
    }

    /// Restrict to a vanishing pattern: drop all symbols marked vanished.
    pub fn reduce(&self, vanished: u64) -> CoeffForm {
        CoeffForm {
            konst: self.konst,
            syms: self
                .syms
                .iter()
                .filter(|(s, _)| vanished & (1u64 << **s) == 0)
                .map(|(s, g)| (*s, *g))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.konst == 0 && self.syms.is_empty()
    }

    pub fn display(&self, names: &[&str]) -> String {
        let mut out = String::new();
        let mut first = true;
        let mut push = |g: i64, name: &str, first: &mut bool| {
            let sign = if g < 0 {
                "-"
            } else if *first {
                ""
            } else {
                "+"
            };
            let mag = g.abs();
            if !*first {
                out.push(' ');
            }
            if g < 0 || !*first {
                out.push_str(sign);
                out.push(' ');
            }
            if mag == 1 && !name.is_empty() {
                out.push_str(name);
            } else if name.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                out.push_str(&format!("{}*{}", mag, name));
            }
            *first = false;
        };
        if self.konst != 0 {
            push(self.konst, "", &mut first);
        }
        let syms: Vec<(usize, i64)> = self.syms.iter().map(|(s, g)| (*s, *g)).collect();
        for (s, g) in syms {
            push(g, names[s], &mut first);
        }
        if first {
            out.push('0');
        }
        out
    }
}

/// Exponent vector of a monomial in the case coordinates.
pub type Mono = Vec<u32>;

/// One defining relation, as a list of (coefficient form, monomial) terms.
#[derive(Clone, Debug)]
pub struct Relation {
    pub name: &'static str,
    pub terms: Vec<(CoeffForm, Mono)>,
}

impl Relation {
    fn term_index(&self, mono: &Mono) -> Option<usize> {
        self.terms.iter().position(|(_, m)| m == mono)
    }
}

/// Coordinate of the ambient weighted projective space.
#[derive(Clone, Debug)]
pub struct Coord {
    pub name: &'static str,
    pub weight: u32,
    pub eigen: u32,
}

/// A ratio parameter `src = dst * xi^r`.
#[derive(Clone, Debug)]
pub struct RatioParam {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

/// One modular equation: sum of unknown terms, ratio terms and a constant,
/// congruent to 0 mod nu.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModularEquation {
    pub modulus: u32,
    pub unknowns: Vec<u32>,
    pub ratios: Vec<(usize, u32)>,
    pub konst: u32,
    pub provenance: Provenance,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Provenance {
    /// The twist as a unit of Z/nu.
    pub twist: u32,
    pub relation: &'static str,
    /// Image-slot symbol and source symbol for coupled comparisons.
    pub target: Option<usize>,
    pub source: Option<usize>,
}

/// Dedup key of a modular equation: unknown coefficients, ratio terms,
/// constant.
type EquationKey = (Vec<u32>, Vec<(usize, u32)>, u32);

/// Ordered coefficient pair to (ratio parameter, sign).
pub type Coupling = BTreeMap<(usize, usize), (usize, i64)>;

impl ModularEquation {
    fn key(&self) -> EquationKey {
        (self.unknowns.clone(), self.ratios.clone(), self.konst)
    }

    pub fn is_trivial(&self) -> bool {
        self.konst == 0 && self.unknowns.iter().all(|&c| c == 0) && self.ratios.is_empty()
    }

    /// Display in the style `n_{1,4} == 3*i2 + i3 (mod 5)`: a single ratio
    /// term with unit coefficient is moved to the left-hand side.
    pub fn display(&self, case: &CaseConfig) -> String {
        let unames: Vec<&str> = case.unknown_names.clone();
        let uform = UForm {
            modulus: self.modulus,
            coeffs: self.unknowns.clone(),
            konst: self.konst,
        };
        if self.ratios.len() == 1 {
            let (rid, c) = self.ratios[0];
            let name = &case.ratio_params[rid].name;
            if c == 1 {
                // r + e == 0  =>  -r == e
                return format!(
                    "-{} == {} (mod {})",
                    name,
                    uform.display(&unames),
                    self.modulus
                );
            } else if c == self.modulus - 1 {
                // -r + e == 0  =>  r == e
                return format!(
                    "{} == {} (mod {})",
                    name,
                    uform.display(&unames),
                    self.modulus
                );
            }
        }
        let mut lhs = uform.display(&unames);
        for (rid, c) in &self.ratios {
            let name = &case.ratio_params[*rid].name;
            if *c == 1 {
                lhs = format!("{} + {}", lhs, name);
            } else {
                lhs = format!("{} + {}*{}", lhs, c, name);
            }
        }
        format!("{} == 0 (mod {})", lhs, self.modulus)
    }
}

/// Linear action of a group element on the coefficient space: for every
/// symbol `src`, the transformed point carries `xi^exp * value(src)` in slot
/// `dst`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffAction {
    /// Indexed by source symbol: (destination slot, xi exponent).
    pub map: Vec<(usize, u32)>,
}

/// Full description of one torsion case.
#[derive(Clone, Debug)]
pub struct CaseConfig {
    pub nu: u32,
    /// Fixed generator of Z/nu^*: 2 for nu in {3, 5}, 3 for nu = 4.
    pub twist_unit: u32,
    /// Order of Z/nu^*.
    pub twist_order: u32,
    pub coords: Vec<Coord>,
    pub unknown_names: Vec<&'static str>,
    /// Diagonal exponent of each coordinate as a form in the unknowns.
    pub candidate_diag: Vec<UForm>,
    pub mod_pars: Vec<&'static str>,
    pub ratio_params: Vec<RatioParam>,
    /// (source symbol, image symbol) -> (ratio param, sign).
    pub coupling: Coupling,
    pub relations: Vec<Relation>,
    /// Coordinate whose diagonal exponent is normalized to zero.
    pub norm_coord: usize,
    /// Exponent shifts that act trivially on the projective family.
    pub norm_lattice: Vec<Vec<u32>>,
    /// Tuple of the torsion generator (twist exponent 0).
    pub torsion_exps: Vec<u32>,
    /// Multiplier forms, indexed by [relation][twist exponent].
    pub multipliers: Vec<Vec<UForm>>,
    /// Per twist exponent, per symbol: image slot (the symbol permutation).
    pub sym_perm: Vec<Vec<usize>>,
    /// Per twist exponent, per symbol: scale form (e-form minus multiplier).
    pub sym_scale: Vec<Vec<UForm>>,
}

impl CaseConfig {
    /// The verbatim transcription of the case data for nu in {3, 4, 5}.
    pub fn builtin(nu: u32) -> Result<CaseConfig> {
        CaseConfig::builtin_with_options(nu, true)
    }

    /// For the order-3 case the degree-7 relation cuts three extra fiber
    /// components next to the surface; `include_h = false` drops it from the
    /// equation generation so the two variants can be compared.
    pub fn builtin_with_options(nu: u32, include_h: bool) -> Result<CaseConfig> {
        let mut case = match nu {
            5 => build_nu5(),
            4 => build_nu4(),
            3 => build_nu3(),
            _ => return Err(GodeauxError::UnsupportedTorsion(nu)),
        };
        if nu == 3 && !include_h {
            case.relations.retain(|r| r.name != "h");
        }
        case.finish()?;
        Ok(case)
    }

    /// Whether a stratum forces both order-3 coefficients a1 and a2 to vanish
    /// jointly; such strata violate the nondegeneracy constraint on the
    /// parameters and are reported, not silently removed.
    pub fn forces_a1_a2_zero(&self, vanished: &std::collections::BTreeSet<usize>) -> bool {
        self.nu == 3 && vanished.contains(&0) && vanished.contains(&1)
    }

    pub fn unknown_count(&self) -> usize {
        self.unknown_names.len()
    }

    /// The unit u = g^h of Z/nu^*.
    pub fn unit_of(&self, h: u32) -> u32 {
        let mut u = 1u64;
        for _ in 0..(h % self.twist_order) {
            u = (u * self.twist_unit as u64) % self.nu as u64;
        }
        u as u32
    }

    /// Twist exponent h with g^h = u, for u a unit mod nu.
    pub fn twist_exponent(&self, u: u32) -> Result<u32> {
        for h in 0..self.twist_order {
            if self.unit_of(h) == u % self.nu {
                return Ok(h);
            }
        }
        Err(GodeauxError::Parse(format!(
            "{} is not a unit power for nu = {}",
            u, self.nu
        )))
    }

    /// Coordinate permutation induced by multiplying eigenspace indices by
    /// u = g^h, within each weight block.
    pub fn coord_perm(&self, h: u32) -> Vec<usize> {
        let u = self.unit_of(h) as u64;
        self.coords
            .iter()
            .map(|c| {
                let target = ((c.eigen as u64 * u) % self.nu as u64) as u32;
                self.coords
                    .iter()
                    .position(|d| d.weight == c.weight && d.eigen == target)
                    .expect("eigenspace permutation must act within weight blocks")
            })
            .collect()
    }

    pub fn mono_image(&self, mono: &Mono, perm: &[usize]) -> Mono {
        let mut out = vec![0u32; mono.len()];
        for (c, &e) in mono.iter().enumerate() {
            out[perm[c]] = e;
        }
        out
    }

    /// The xi-exponent form picked up by a monomial under the generic candidate.
    pub fn eform(&self, mono: &Mono) -> UForm {
        let mut f = UForm::zero(self.nu, self.unknown_count());
        for (c, &e) in mono.iter().enumerate() {
            f.add_scaled(&self.candidate_diag[c], e as i64);
        }
        f
    }

    fn weighted_degree(&self, mono: &Mono) -> u32 {
        mono.iter()
            .zip(self.coords.iter())
            .map(|(&e, c)| e * c.weight)
            .sum()
    }

    fn eigenvalue(&self, mono: &Mono) -> u32 {
        let s: u64 = mono
            .iter()
            .zip(self.coords.iter())
            .map(|(&e, c)| e as u64 * c.eigen as u64)
            .sum();
        (s % self.nu as u64) as u32
    }

    /// Derive multipliers, symbol actions, and check all structural invariants.
    fn finish(&mut self) -> Result<()> {
        let nu = self.nu;
        // relation homogeneity and eigenspace coherence
        for rel in &self.relations {
            let deg = self.weighted_degree(&rel.terms[0].1);
            let eig = self.eigenvalue(&rel.terms[0].1);
            for (_, mono) in &rel.terms {
                if self.weighted_degree(mono) != deg {
                    return Err(GodeauxError::Internal(format!(
                        "{}: inhomogeneous term in relation",
                        rel.name
                    )));
                }
                if self.eigenvalue(mono) != eig {
                    return Err(GodeauxError::Internal(format!(
                        "{}: term outside the relation eigenspace",
                        rel.name
                    )));
                }
            }
            // monomials must be unique within a relation
            let mut seen = std::collections::BTreeSet::new();
            for (_, mono) in &rel.terms {
                if !seen.insert(mono.clone()) {
                    return Err(GodeauxError::Internal(format!(
                        "{}: duplicate monomial",
                        rel.name
                    )));
                }
            }
        }
        // multipliers from constant monomials
        let mut multipliers = Vec::new();
        for rel in &self.relations {
            let mut per_twist = Vec::new();
            for h in 0..self.twist_order {
                let perm = self.coord_perm(h);
                let mut m_form: Option<UForm> = None;
                for (f, mono) in &rel.terms {
                    if !f.syms.is_empty() || f.konst == 0 {
                        continue;
                    }
                    let img = self.mono_image(mono, &perm);
                    let Some(tidx) = rel.term_index(&img) else {
                        return Err(GodeauxError::MultiplierInconsistent(format!(
                            "{}: constant monomial maps outside the relation",
                            rel.name
                        )));
                    };
                    let (tf, _) = &rel.terms[tidx];
                    if !tf.syms.is_empty() || tf.konst != f.konst {
                        return Err(GodeauxError::MultiplierInconsistent(format!(
                            "{}: constant monomial lands on a non-matching coefficient",
                            rel.name
                        )));
                    }
                    let e = self.eform(mono);
                    match &m_form {
                        None => m_form = Some(e),
                        Some(m) => {
                            if *m != e {
                                return Err(GodeauxError::MultiplierInconsistent(format!(
                                    "{} (twist exponent {})",
                                    rel.name, h
                                )));
                            }
                        }
                    }
                }
                match m_form {
                    Some(m) => per_twist.push(m),
                    None => {
                        return Err(GodeauxError::MultiplierInconsistent(format!(
                            "{}: no constant monomial",
                            rel.name
                        )))
                    }
                }
            }
            multipliers.push(per_twist);
        }
        self.multipliers = multipliers;

        // symbol permutation and scale forms, derived from every slot where
        // the coefficient pairing is unambiguous (a symmetric compound slot
        // like c1 + c2 mapping onto itself admits both the identity pairing
        // and the coupled one and pins nothing by itself)
        let nsyms = self.mod_pars.len();
        let mut sym_perm = Vec::new();
        let mut sym_scale = Vec::new();
        for h in 0..self.twist_order {
            let perm = self.coord_perm(h);
            let mut dst: Vec<Option<usize>> = vec![None; nsyms];
            let mut scale: Vec<Option<UForm>> = vec![None; nsyms];
            for (ri, rel) in self.relations.iter().enumerate() {
                for (f, mono) in &rel.terms {
                    if f.syms.is_empty() {
                        continue;
                    }
                    let img = self.mono_image(mono, &perm);
                    let Some(tidx) = rel.term_index(&img) else {
                        return Err(GodeauxError::Internal(format!(
                            "{}: parametric monomial maps outside the relation",
                            rel.name
                        )));
                    };
                    let (tf, _) = &rel.terms[tidx];
                    let diff = self.eform(mono).sub(&self.multipliers[ri][h as usize]);
                    for (&p, &g) in &f.syms {
                        let mut candidates: Vec<usize> = Vec::new();
                        if tf.syms.get(&p) == Some(&g) {
                            candidates.push(p);
                        }
                        for (s, d) in self.coupling.keys() {
                            if *s == p && tf.syms.get(d) == Some(&g) {
                                candidates.push(*d);
                            }
                        }
                        candidates.dedup();
                        let [q] = candidates.as_slice() else { continue };
                        match (&dst[p], &scale[p]) {
                            (None, _) => {
                                dst[p] = Some(*q);
                                scale[p] = Some(diff.clone());
                            }
                            (Some(q0), Some(d0)) => {
                                if q0 != q || *d0 != diff {
                                    return Err(GodeauxError::Internal(format!(
                                        "inconsistent coefficient action for {} under twist {}",
                                        self.mod_pars[p],
                                        self.unit_of(h)
                                    )));
                                }
                            }
                            _ => unreachable!(),
                        }
                    }
                }
            }
            let dstv: Vec<usize> = dst
                .into_iter()
                .enumerate()
                .map(|(p, d)| {
                    d.ok_or_else(|| {
                        GodeauxError::Internal(format!(
                            "the action of {} is not pinned by any slot",
                            self.mod_pars[p]
                        ))
                    })
                })
                .collect::<Result<_>>()?;
            let scalev: Vec<UForm> = scale.into_iter().map(|s| s.unwrap()).collect();
            // the symbol map must be a permutation
            let mut hit = vec![false; nsyms];
            for &d in &dstv {
                if hit[d] {
                    return Err(GodeauxError::Internal(
                        "symbol action is not a permutation".into(),
                    ));
                }
                hit[d] = true;
            }
            sym_perm.push(dstv);
            sym_scale.push(scalev);
        }
        self.sym_perm = sym_perm;
        self.sym_scale = sym_scale;

        // compound slots must be coherent with the derived symbol action
        for h in 0..self.twist_order {
            let perm = self.coord_perm(h);
            for (ri, rel) in self.relations.iter().enumerate() {
                for (f, mono) in &rel.terms {
                    let img = self.mono_image(mono, &perm);
                    let tidx = rel.term_index(&img).ok_or_else(|| {
                        GodeauxError::Internal(format!("{}: unstable monomial set", rel.name))
                    })?;
                    let (tf, _) = &rel.terms[tidx];
                    let diff = self.eform(mono).sub(&self.multipliers[ri][h as usize]);
                    if tf.konst != f.konst {
                        return Err(GodeauxError::Internal(format!(
                            "{}: constant part mismatch under twist",
                            rel.name
                        )));
                    }
                    for (&p, &g) in &f.syms {
                        let q = self.sym_perm[h as usize][p];
                        if tf.syms.get(&q) != Some(&g) {
                            return Err(GodeauxError::Internal(format!(
                                "{}: {} does not land on its image slot with equal coefficient",
                                rel.name, self.mod_pars[p]
                            )));
                        }
                        if self.sym_scale[h as usize][p] != diff {
                            return Err(GodeauxError::Internal(format!(
                                "{}: inconsistent scale for {} in a compound slot",
                                rel.name, self.mod_pars[p]
                            )));
                        }
                    }
                    if f.syms.len() != tf.syms.len() {
                        return Err(GodeauxError::Internal(format!(
                            "{}: unmatched symbols in image slot",
                            rel.name
                        )));
                    }
                }
            }
        }

        // the torsion generator must act trivially on every coefficient
        let gen = GroupElement::new(nu, self.torsion_exps.clone(), 0);
        let act = self.param_action(&gen)?;
        for (p, &(dst, e)) in act.map.iter().enumerate() {
            if dst != p || e != 0 {
                return Err(GodeauxError::Internal(format!(
                    "torsion generator does not act trivially on {}",
                    self.mod_pars[p]
                )));
            }
        }
        Ok(())
    }

    /// The linear action of a group element on the coefficient space.
    pub fn param_action(&self, el: &GroupElement) -> Result<CoeffAction> {
        if el.nu != self.nu {
            return Err(GodeauxError::CaseMismatch);
        }
        let h = (el.h % self.twist_order) as usize;
        let map = (0..self.mod_pars.len())
            .map(|p| (self.sym_perm[h][p], self.sym_scale[h][p].eval(&el.exps)))
            .collect();
        Ok(CoeffAction { map })
    }

    /// Apply a candidate twist to one relation: each term is mapped through the
    /// coordinate permutation and acquires its xi-exponent form.
    pub fn apply_candidate(&self, rel: usize, h: u32) -> Vec<(CoeffForm, Mono, UForm)> {
        let perm = self.coord_perm(h);
        self.relations[rel]
            .terms
            .iter()
            .map(|(f, mono)| (f.clone(), self.mono_image(mono, &perm), self.eform(mono)))
            .collect()
    }

    /// Collect the modular equations for one vanishing pattern and twist
    /// exponent; `None` means the comparison is unsatisfiable for generic
    /// points of the pattern (no automorphism with this twist exists there).
    pub fn collect_equations(&self, vanished: u64, h: u32) -> Result<Option<Vec<ModularEquation>>> {
        let perm = self.coord_perm(h);
        let inv_perm = {
            let mut inv = vec![0usize; perm.len()];
            for (i, &p) in perm.iter().enumerate() {
                inv[p] = i;
            }
            inv
        };
        let mut out: Vec<ModularEquation> = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for (ri, rel) in self.relations.iter().enumerate() {
            let m_form = &self.multipliers[ri][h as usize];
            for (tf_raw, tmono) in &rel.terms {
                // source monomial mapping onto this slot
                let smono = self.mono_image(tmono, &inv_perm);
                let sidx = rel.term_index(&smono).ok_or_else(|| {
                    GodeauxError::Internal(format!("{}: unstable monomial set", rel.name))
                })?;
                let (sf_raw, _) = &rel.terms[sidx];
                let sf = sf_raw.reduce(vanished);
                let tf = tf_raw.reduce(vanished);
                if sf.is_zero() && tf.is_zero() {
                    continue;
                }
                if sf.is_zero() != tf.is_zero() {
                    return Ok(None);
                }
                let diff = self.eform(&smono).sub(m_form);
                if sf.konst != tf.konst {
                    return Ok(None);
                }
                if sf.konst != 0 {
                    // constant block: consistency with the multiplier
                    self.push_eq(&mut out, &mut seen, &diff, None, h, rel.name, None, None);
                }
                let mut matched = std::collections::BTreeSet::new();
                for (&p, &g) in &sf.syms {
                    let q = if tf.syms.get(&p) == Some(&g) {
                        p
                    } else {
                        // coupled partner with the same integer coefficient
                        let mut found = None;
                        for (s, d) in self.coupling.keys() {
                            if *s == p && tf.syms.get(d) == Some(&g) {
                                found = Some(*d);
                                break;
                            }
                        }
                        match found {
                            Some(q) => q,
                            None => return Ok(None),
                        }
                    };
                    matched.insert(q);
                    let ratio = if p == q {
                        None
                    } else {
                        Some(*self.coupling.get(&(p, q)).ok_or_else(|| {
                            GodeauxError::Internal(format!(
                                "missing coupling for ({}, {})",
                                self.mod_pars[p], self.mod_pars[q]
                            ))
                        })?)
                    };
                    self.push_eq(
                        &mut out,
                        &mut seen,
                        &diff,
                        ratio,
                        h,
                        rel.name,
                        Some(q),
                        Some(p),
                    );
                }
                if matched.len() != tf.syms.len() {
                    return Ok(None);
                }
            }
        }
        Ok(Some(out))
    }

    #[allow(clippy::too_many_arguments)]
    fn push_eq(
        &self,
        out: &mut Vec<ModularEquation>,
        seen: &mut std::collections::BTreeSet<EquationKey>,
        diff: &UForm,
        ratio: Option<(usize, i64)>,
        h: u32,
        relation: &'static str,
        target: Option<usize>,
        source: Option<usize>,
    ) {
        let nu = self.nu as i64;
        let mut ratios = Vec::new();
        if let Some((rid, sign)) = ratio {
            ratios.push((rid, sign.rem_euclid(nu) as u32));
        }
        let eq = ModularEquation {
            modulus: self.nu,
            unknowns: diff.coeffs.clone(),
            ratios,
            konst: diff.konst,
            provenance: Provenance {
                twist: self.unit_of(h),
                relation,
                target,
                source,
            },
        };
        if eq.is_trivial() {
            return;
        }
        if seen.insert(eq.key()) {
            out.push(eq);
        }
    }

    /// The full equation dictionary for one twist (nothing vanished), in the
    /// order the relations list their monomial slots.
    pub fn equations_dictionary(&self, h: u32) -> Result<Vec<ModularEquation>> {
        self.collect_equations(0, h)?
            .ok_or_else(|| GodeauxError::Internal("full pattern must be satisfiable".into()))
    }

    /// Stable content digest of the case data.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        h.update(format!("nu={};unit={};", self.nu, self.twist_unit));
        for c in &self.coords {
            h.update(format!("coord={},{},{};", c.name, c.weight, c.eigen));
        }
        for p in &self.mod_pars {
            h.update(format!("par={};", p));
        }
        for r in &self.ratio_params {
            h.update(format!("ratio={},{},{};", r.name, r.src, r.dst));
        }
        for rel in &self.relations {
            h.update(format!("rel={};", rel.name));
            for (f, mono) in &rel.terms {
                h.update(format!("{}|{:?};", f.display(&self.mod_pars), mono));
            }
        }
        let out = h.finalize();
        out.iter().map(|b| format!("{:02x}", b)).collect()
    }
}

fn build_nu5() -> CaseConfig {
    let coords = vec![
        Coord {
            name: "x1",
            weight: 1,
            eigen: 1,
        },
        Coord {
            name: "x2",
            weight: 1,
            eigen: 2,
        },
        Coord {
            name: "x3",
            weight: 1,
            eigen: 3,
        },
        Coord {
            name: "x4",
            weight: 1,
            eigen: 4,
        },
    ];
    // b1..b4, c1..c4
    let mod_pars = vec!["b1", "b2", "b3", "b4", "c1", "c2", "c3", "c4"];
    let (b1, b2, b3, b4, c1, c2, c3, c4) = (0, 1, 2, 3, 4, 5, 6, 7);
    let c = |k: i64| CoeffForm::constant(k);
    let s = |p: usize| CoeffForm::sym(p, 1);
    let q0 = Relation {
        name: "q0",
        terms: vec![
            (c(1), vec![5, 0, 0, 0]),
            (c(1), vec![0, 5, 0, 0]),
            (c(1), vec![0, 0, 5, 0]),
            (c(1), vec![0, 0, 0, 5]),
            (s(b1), vec![0, 1, 3, 1]),
            (s(b2), vec![3, 0, 1, 1]),
            (s(b3), vec![1, 1, 0, 3]),
            (s(b4), vec![1, 3, 1, 0]),
            (s(c1), vec![0, 2, 1, 2]),
            (s(c2), vec![1, 0, 2, 2]),
            (s(c3), vec![2, 2, 0, 1]),
            (s(c4), vec![2, 1, 2, 0]),
        ],
    };
    // ratio parameters for every ordered coefficient pair arising under a twist
    let pairs = [
        ("n_{1,4}", b1, b4),
        ("n_{3,2}", b3, b2),
        ("n_{1,2}", b1, b2),
        ("n_{2,4}", b2, b4),
        ("n_{4,3}", b4, b3),
        ("n_{3,1}", b3, b1),
        ("m_{1,4}", c1, c4),
        ("m_{3,2}", c3, c2),
        ("m_{1,2}", c1, c2),
        ("m_{2,4}", c2, c4),
        ("m_{4,3}", c4, c3),
        ("m_{3,1}", c3, c1),
    ];
    let (ratio_params, coupling) = make_coupling(&pairs);
    CaseConfig {
        nu: 5,
        twist_unit: 2,
        twist_order: 4,
        coords,
        unknown_names: vec!["i2", "i3", "i4"],
        candidate_diag: vec![
            UForm::from_coeffs(5, &[0, 0, 0]),
            UForm::from_coeffs(5, &[1, 0, 0]),
            UForm::from_coeffs(5, &[0, 1, 0]),
            UForm::from_coeffs(5, &[0, 0, 1]),
        ],
        mod_pars,
        ratio_params,
        coupling,
        relations: vec![q0],
        norm_coord: 0,
        norm_lattice: vec![vec![1, 1, 1, 1]],
        torsion_exps: vec![1, 2, 3],
        multipliers: Vec::new(),
        sym_perm: Vec::new(),
        sym_scale: Vec::new(),
    }
}

fn build_nu4() -> CaseConfig {
    let coords = vec![
        Coord {
            name: "x1",
            weight: 1,
            eigen: 1,
        },
        Coord {
            name: "x2",
            weight: 1,
            eigen: 2,
        },
        Coord {
            name: "x3",
            weight: 1,
            eigen: 3,
        },
        Coord {
            name: "y1",
            weight: 2,
            eigen: 1,
        },
        Coord {
            name: "y3",
            weight: 2,
            eigen: 3,
        },
    ];
    let mod_pars = vec!["a", "a'", "b1", "b3", "c1", "c3", "d1", "d3"];
    let (a, ap, b1, b3, c1, c3, d1, d3) = (0, 1, 2, 3, 4, 5, 6, 7);
    let c = |k: i64| CoeffForm::constant(k);
    let s = |p: usize| CoeffForm::sym(p, 1);
    let q0 = Relation {
        name: "q0",
        terms: vec![
            (c(1), vec![4, 0, 0, 0, 0]),
            (c(1), vec![0, 4, 0, 0, 0]),
            (c(1), vec![0, 0, 4, 0, 0]),
            (s(a), vec![2, 0, 2, 0, 0]),
            (s(ap), vec![1, 2, 1, 0, 0]),
            (c(1), vec![0, 0, 0, 1, 1]),
            (s(b1), vec![1, 1, 0, 1, 0]),
            (s(b3), vec![0, 1, 1, 0, 1]),
        ],
    };
    let q2 = Relation {
        name: "q2",
        terms: vec![
            (s(c1), vec![3, 0, 1, 0, 0]),
            (s(c3), vec![1, 0, 3, 0, 0]),
            (s(d1), vec![2, 2, 0, 0, 0]),
            (s(d3), vec![0, 2, 2, 0, 0]),
            (c(1), vec![0, 0, 0, 2, 0]),
            (c(1), vec![0, 0, 0, 0, 2]),
        ],
    };
    let pairs = [
        ("n_{1,3}", b1, b3),
        ("m_{1,3}", c1, c3),
        ("p_{1,3}", d1, d3),
    ];
    let (ratio_params, coupling) = make_coupling(&pairs);
    CaseConfig {
        nu: 4,
        twist_unit: 3,
        twist_order: 2,
        coords,
        unknown_names: vec!["i1", "i3", "j1"],
        candidate_diag: vec![
            UForm::from_coeffs(4, &[1, 0, 0]),
            UForm::from_coeffs(4, &[0, 0, 0]),
            UForm::from_coeffs(4, &[0, 1, 0]),
            UForm::from_coeffs(4, &[0, 0, 1]),
            UForm::from_coeffs(4, &[0, 0, -1]),
        ],
        mod_pars,
        ratio_params,
        coupling,
        relations: vec![q0, q2],
        norm_coord: 1,
        norm_lattice: vec![vec![1, 1, 1, 2, 2]],
        torsion_exps: vec![1, 3, 3],
        multipliers: Vec::new(),
        sym_perm: Vec::new(),
        sym_scale: Vec::new(),
    }
}

fn build_nu3() -> CaseConfig {
    let coords = vec![
        Coord {
            name: "x1",
            weight: 1,
            eigen: 1,
        },
        Coord {
            name: "x2",
            weight: 1,
            eigen: 2,
        },
        Coord {
            name: "y0",
            weight: 2,
            eigen: 0,
        },
        Coord {
            name: "y1",
            weight: 2,
            eigen: 1,
        },
        Coord {
            name: "y2",
            weight: 2,
            eigen: 2,
        },
    ];
    let mod_pars = vec!["a1", "a2", "b1", "b12", "b2", "c1", "c2", "d1", "d2"];
    let (a1, a2, b1, b12, b2, c1, c2, d1, d2) = (0, 1, 2, 3, 4, 5, 6, 7, 8);
    let c = |k: i64| CoeffForm::constant(k);
    let s = |p: usize| CoeffForm::sym(p, 1);
    let neg = |p: usize| CoeffForm::sym(p, -1);
    // coordinates (x1, x2, y0, y1, y2)
    let q0 = Relation {
        name: "q0",
        terms: vec![
            (c(1), vec![1, 1, 2, 0, 0]),
            (c(-1), vec![1, 1, 0, 1, 1]),
            (c(-1), vec![2, 0, 0, 0, 2]),
            (c(1), vec![2, 0, 1, 1, 0]),
            (c(-1), vec![0, 2, 0, 2, 0]),
            (c(1), vec![0, 2, 1, 0, 1]),
            (s(a1), vec![3, 1, 0, 1, 0]),
            (s(a2), vec![1, 3, 0, 0, 1]),
            (neg(b1), vec![6, 0, 0, 0, 0]),
            (s(b12), vec![3, 3, 0, 0, 0]),
            (neg(b2), vec![0, 6, 0, 0, 0]),
        ],
    };
    let p0 = Relation {
        name: "p0",
        terms: vec![
            (c(1), vec![0, 0, 3, 0, 0]),
            (c(1), vec![0, 0, 0, 3, 0]),
            (c(1), vec![0, 0, 0, 0, 3]),
            (c(-3), vec![0, 0, 1, 1, 1]),
            (s(a1), vec![2, 0, 1, 1, 0]),
            (s(a2), vec![0, 2, 1, 0, 1]),
            (neg(a1).plus(a2, -1), vec![1, 1, 0, 1, 1]),
            (s(a1), vec![0, 2, 0, 2, 0]),
            (s(a2), vec![2, 0, 0, 0, 2]),
            (s(b1).plus(b12, 1).plus(b2, 1), vec![2, 2, 1, 0, 0]),
            (s(b2).plus(d2, 1), vec![0, 4, 0, 1, 0]),
            (neg(b1).plus(b12, -1).plus(d2, 1), vec![3, 1, 0, 1, 0]),
            (s(b1).plus(d1, 1), vec![4, 0, 0, 0, 1]),
            (neg(b12).plus(b2, -1).plus(d1, 1), vec![1, 3, 0, 0, 1]),
            (s(c1), vec![6, 0, 0, 0, 0]),
            (s(c1).plus(c2, 1), vec![3, 3, 0, 0, 0]),
            (s(c2), vec![0, 6, 0, 0, 0]),
        ],
    };
    let hrel = Relation {
        name: "h",
        terms: vec![
            (c(1), vec![1, 0, 0, 1, 2]),
            (c(-1), vec![1, 0, 1, 2, 0]),
            (c(1), vec![0, 1, 0, 2, 1]),
            (c(-1), vec![0, 1, 1, 0, 2]),
            (neg(a1), vec![2, 1, 0, 2, 0]),
            (neg(a2), vec![1, 2, 0, 0, 2]),
            (neg(b1), vec![4, 1, 1, 0, 0]),
            (neg(b2), vec![1, 4, 1, 0, 0]),
            (s(b1), vec![5, 0, 0, 1, 0]),
            (s(b2), vec![0, 5, 0, 0, 1]),
            (neg(c1), vec![5, 2, 0, 0, 0]),
            (neg(c2), vec![2, 5, 0, 0, 0]),
            (neg(d1), vec![3, 2, 0, 0, 1]),
            (neg(d2), vec![2, 3, 0, 1, 0]),
        ],
    };
    let pairs = [
        ("r_a", a1, a2),
        ("r_b", b1, b2),
        ("r_c", c1, c2),
        ("r_d", d1, d2),
    ];
    let (ratio_params, coupling) = make_coupling(&pairs);
    CaseConfig {
        nu: 3,
        twist_unit: 2,
        twist_order: 2,
        coords,
        unknown_names: vec!["k"],
        candidate_diag: vec![
            UForm::from_coeffs(3, &[0]),
            UForm::from_coeffs(3, &[1]),
            UForm::from_coeffs(3, &[1]),
            UForm::from_coeffs(3, &[2]),
            UForm::from_coeffs(3, &[0]),
        ],
        mod_pars,
        ratio_params,
        coupling,
        relations: vec![q0, p0, hrel],
        norm_coord: 0,
        norm_lattice: vec![vec![1, 1, 0, 0, 0], vec![0, 0, 1, 1, 1]],
        torsion_exps: vec![1],
        multipliers: Vec::new(),
        sym_perm: Vec::new(),
        sym_scale: Vec::new(),
    }
}

fn make_coupling(pairs: &[(&str, usize, usize)]) -> (Vec<RatioParam>, Coupling) {
    let mut params = Vec::new();
    let mut coupling = BTreeMap::new();
    for (i, (name, src, dst)) in pairs.iter().enumerate() {
        params.push(RatioParam {
            name: (*name).to_string(),
            src: *src,
            dst: *dst,
        });
        coupling.insert((*src, *dst), (i, 1i64));
        coupling.insert((*dst, *src), (i, -1i64));
    }
    (params, coupling)
}
