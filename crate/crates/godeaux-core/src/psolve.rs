//! Parametric linear congruence systems: unknown exponents are solved for,
//! ratio symbols are treated as parameters, and solvability conditions purely
//! among the parameters are split off. The value of a parameter never depends
//! on a regular unknown.

use crate::config::{CaseConfig, ModularEquation};
use crate::error::{GodeauxError, Result};
use crate::zmod::{AffineSolutionSet, ZModMatrix};

/// A linear system over Z/nu in unknowns and parameters.
#[derive(Clone, Debug)]
pub struct ParamSystem {
    pub modulus: u32,
    pub unknowns: usize,
    /// Ratio parameter ids, in ascending order; columns follow this order.
    pub params: Vec<usize>,
    /// Rows: unknown coefficients, parameter coefficients, constant. The
    /// equation reads u.x + p.y + konst = 0.
    pub rows: Vec<(Vec<u32>, Vec<u32>, u32)>,
}

impl ParamSystem {
    /// Assemble a system from generated modular equations. Parameters are the
    /// ratio symbols that actually occur.
    pub fn from_equations(case: &CaseConfig, eqs: &[ModularEquation]) -> ParamSystem {
        let mut params: Vec<usize> = eqs
            .iter()
            .flat_map(|e| e.ratios.iter().map(|r| r.0))
            .collect();
        params.sort_unstable();
        params.dedup();
        let rows = eqs
            .iter()
            .map(|e| {
                let mut p = vec![0u32; params.len()];
                for (rid, c) in &e.ratios {
                    let ix = params.binary_search(rid).unwrap();
                    p[ix] = (p[ix] + c) % case.nu;
                }
                (e.unknowns.clone(), p, e.konst)
            })
            .collect();
        ParamSystem {
            modulus: case.nu,
            unknowns: case.unknown_count(),
            params,
            rows,
        }
    }

    /// Canonical-form elimination ordering unknowns before parameters.
    pub fn solve(&self) -> ParametricSolution {
        let nu = self.modulus;
        let cols = self.unknowns + self.params.len() + 1;
        let mut entries: Vec<i64> = Vec::with_capacity(self.rows.len() * cols);
        for (u, p, k) in &self.rows {
            entries.extend(u.iter().map(|&c| c as i64));
            entries.extend(p.iter().map(|&c| c as i64));
            // u.x + p.y + k = 0  <=>  u.x + p.y = -k
            entries.push((-(*k as i64)).rem_euclid(nu as i64));
        }
        let reduced = ZModMatrix::new(nu, self.rows.len(), cols, entries).howell();
        // a row reducing to a nonzero constant kills the system outright when
        // there are no parameters; with parameters present it lands among the
        // parameter constraints, where it yields zero assignments
        let mut empty = false;
        let mut param_rows = Vec::new();
        for r in 0..reduced.rows() {
            let row = reduced.row(r);
            let lead = row.iter().position(|&x| x != 0);
            match lead {
                Some(c) if c == cols - 1 && self.params.is_empty() => empty = true,
                Some(c) if c >= self.unknowns => {
                    param_rows.push(row.to_vec());
                }
                _ => {}
            }
        }
        ParametricSolution {
            modulus: nu,
            unknowns: self.unknowns,
            params: self.params.clone(),
            reduced,
            param_rows,
            empty,
        }
    }
}

/// Canonical form of a parametric system: solved unknown rows plus the
/// solvability constraints among parameters only.
#[derive(Clone, Debug)]
pub struct ParametricSolution {
    pub modulus: u32,
    pub unknowns: usize,
    pub params: Vec<usize>,
    /// Howell form of the joint system, unknown columns first, then parameter
    /// columns, then the constant column.
    reduced: ZModMatrix,
    /// The rows with zero unknown part: affine congruences among parameters.
    param_rows: Vec<Vec<u32>>,
    empty: bool,
}

/// An affine form `konst + sum coeff * param` over the parameters.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineForm {
    pub modulus: u32,
    pub konst: u32,
    pub coeffs: Vec<u32>,
}

impl AffineForm {
    pub fn eval(&self, pvals: &[u32]) -> u32 {
        let m = self.modulus as i64;
        let mut acc = self.konst as i64;
        for (c, v) in self.coeffs.iter().zip(pvals.iter()) {
            acc += *c as i64 * *v as i64;
        }
        acc.rem_euclid(m) as u32
    }
}

impl ParametricSolution {
    pub fn is_empty(&self) -> bool {
        self.empty
    }

    /// Parameter constraints contain no unknowns, by construction.
    pub fn param_constraints(&self) -> &[Vec<u32>] {
        &self.param_rows
    }

    /// All parameter assignments satisfying the constraints, each defining a
    /// sub-stratum; deterministic lexicographic order.
    pub fn iter_pars_solutions(&self) -> Result<Vec<Vec<u32>>> {
        if self.empty {
            return Err(GodeauxError::EmptySolutionSet);
        }
        let np = self.params.len();
        if np == 0 {
            return Ok(vec![Vec::new()]);
        }
        // constraint system over the parameters alone
        let mut entries = Vec::new();
        let mut rhs = Vec::new();
        for row in &self.param_rows {
            let p = &row[self.unknowns..self.unknowns + np];
            entries.extend(p.iter().map(|&c| c as i64));
            rhs.push(row[self.unknowns + np] as i64);
        }
        let a = ZModMatrix::new(self.modulus, self.param_rows.len(), np, entries);
        let sols = a.solve_affine(&rhs)?;
        if sols.is_empty() {
            return Ok(Vec::new());
        }
        sols.enumerate()
    }

    /// The affine solution set of the unknowns at a concrete parameter
    /// assignment.
    pub fn solutions_at(&self, pvals: &[u32]) -> Result<AffineSolutionSet> {
        if self.empty {
            return Err(GodeauxError::EmptySolutionSet);
        }
        let np = self.params.len();
        assert_eq!(pvals.len(), np);
        let k = self.unknowns;
        let mut entries = Vec::new();
        let mut rhs = Vec::new();
        for r in 0..self.reduced.rows() {
            let row = self.reduced.row(r);
            entries.extend(row[..k].iter().map(|&c| c as i64));
            let mut b = row[k + np] as i64;
            for (j, &pv) in pvals.iter().enumerate() {
                b -= row[k + j] as i64 * pv as i64;
            }
            rhs.push(b.rem_euclid(self.modulus as i64));
        }
        let a = ZModMatrix::new(self.modulus, self.reduced.rows(), k, entries);
        a.solve_affine(&rhs)
    }

    /// Enumerate the unknown assignments as affine forms in the parameters.
    /// Requires every pivot on an unknown column to be solvable symbolically;
    /// the concrete-path `solutions_at` has no such restriction.
    pub fn iter_solutions(&self) -> Result<Vec<Vec<AffineForm>>> {
        if self.empty {
            return Err(GodeauxError::EmptySolutionSet);
        }
        let m = self.modulus as i64;
        let k = self.unknowns;
        let np = self.params.len();
        let mut pivot_row: Vec<Option<usize>> = vec![None; k];
        for r in 0..self.reduced.rows() {
            let row = self.reduced.row(r);
            if let Some(c) = row.iter().position(|&x| x != 0) {
                if c < k {
                    pivot_row[c] = Some(r);
                }
            }
        }
        let mut out: Vec<Vec<AffineForm>> = Vec::new();
        let mut work: Vec<Option<AffineForm>> = vec![None; k];
        self.iter_rec(k as isize - 1, &pivot_row, &mut work, &mut out, m, np)?;
        Ok(out)
    }

    fn iter_rec(
        &self,
        col: isize,
        pivot_row: &[Option<usize>],
        work: &mut Vec<Option<AffineForm>>,
        out: &mut Vec<Vec<AffineForm>>,
        m: i64,
        np: usize,
    ) -> Result<()> {
        if col < 0 {
            out.push(work.iter().map(|w| w.clone().unwrap()).collect());
            return Ok(());
        }
        let c = col as usize;
        let k = self.unknowns;
        match pivot_row[c] {
            None => {
                for v in 0..m {
                    work[c] = Some(AffineForm {
                        modulus: self.modulus,
                        konst: v as u32,
                        coeffs: vec![0; np],
                    });
                    self.iter_rec(col - 1, pivot_row, work, out, m, np)?;
                }
                work[c] = None;
            }
            Some(r) => {
                let row = self.reduced.row(r);
                let d = row[c] as i64;
                // rhs form: konst part and parameter part, minus the
                // already-assigned unknown columns to the right
                let mut konst = row[k + np] as i64;
                let mut coeffs: Vec<i64> = (0..np).map(|j| -(row[k + j] as i64)).collect();
                for j in c + 1..k {
                    let a = row[j] as i64;
                    if a == 0 {
                        continue;
                    }
                    let w = work[j].as_ref().unwrap();
                    konst -= a * w.konst as i64;
                    for (cc, &wc) in coeffs.iter_mut().zip(w.coeffs.iter()) {
                        *cc -= a * wc as i64;
                    }
                }
                if d == 1 {
                    work[c] = Some(AffineForm {
                        modulus: self.modulus,
                        konst: konst.rem_euclid(m) as u32,
                        coeffs: coeffs.iter().map(|&x| x.rem_euclid(m) as u32).collect(),
                    });
                    self.iter_rec(col - 1, pivot_row, work, out, m, np)?;
                    work[c] = None;
                } else {
                    // non-unit pivot: representable only when the rhs is
                    // divisible by d symbolically
                    if coeffs.iter().any(|&x| x.rem_euclid(m) % d != 0)
                        || konst.rem_euclid(m) % d != 0
                    {
                        return Err(GodeauxError::NotAffine(format!(
                            "pivot {} does not divide a parameter-dependent right-hand side",
                            d
                        )));
                    }
                    let base_k = konst.rem_euclid(m) / d;
                    let base_c: Vec<i64> = coeffs.iter().map(|&x| x.rem_euclid(m) / d).collect();
                    let step = m / d;
                    for t in 0..d {
                        work[c] = Some(AffineForm {
                            modulus: self.modulus,
                            konst: ((base_k + t * step).rem_euclid(m)) as u32,
                            coeffs: base_c.iter().map(|&x| x.rem_euclid(m) as u32).collect(),
                        });
                        self.iter_rec(col - 1, pivot_row, work, out, m, np)?;
                    }
                    work[c] = None;
                }
            }
        }
        Ok(())
    }

    /// Offset and free-direction generators at the zero parameter assignment.
    pub fn gens_sample_solutions(&self) -> Result<(Vec<u32>, Vec<Vec<u32>>)> {
        let sols = self.solutions_at(&vec![0; self.params.len()])?;
        if sols.is_empty() {
            return Err(GodeauxError::EmptySolutionSet);
        }
        Ok((sols.offset()?, sols.basis()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::CaseConfig;

    /// Build a bare system without case machinery.
    fn sys(
        modulus: u32,
        unknowns: usize,
        params: usize,
        rows: &[(&[i64], &[i64], i64)],
    ) -> ParamSystem {
        let m = modulus as i64;
        ParamSystem {
            modulus,
            unknowns,
            params: (0..params).collect(),
            rows: rows
                .iter()
                .map(|(u, p, k)| {
                    (
                        u.iter().map(|&c| c.rem_euclid(m) as u32).collect(),
                        p.iter().map(|&c| c.rem_euclid(m) as u32).collect(),
                        k.rem_euclid(m) as u32,
                    )
                })
                .collect(),
        }
    }

    #[test]
    fn empty_equation_list_leaves_everything_free() {
        let s = sys(5, 2, 0, &[]).solve();
        assert!(!s.is_empty());
        assert_eq!(s.iter_pars_solutions().unwrap(), vec![Vec::<u32>::new()]);
        assert_eq!(s.iter_solutions().unwrap().len(), 25);
    }

    #[test]
    fn twist_identity_system_nu5() {
        // the eight congruences of the identity-twist system
        let rows: Vec<(&[i64], &[i64], i64)> = vec![
            (&[1, 3, 1], &[], 0),
            (&[0, 1, 1], &[], 0),
            (&[1, 0, 3], &[], 0),
            (&[3, 1, 0], &[], 0),
            (&[2, 1, 2], &[], 0),
            (&[0, 2, 2], &[], 0),
            (&[2, 0, 1], &[], 0),
            (&[1, 2, 0], &[], 0),
        ];
        let s = sys(5, 3, 0, &rows).solve();
        let sols = s.iter_solutions().unwrap();
        assert_eq!(sols.len(), 5);
        let values: Vec<Vec<u32>> = sols
            .iter()
            .map(|a| a.iter().map(|f| f.konst).collect())
            .collect();
        for v in &values {
            assert_eq!(v[1], (2 * v[0]) % 5, "i3 = 2 i2");
            assert_eq!(v[2], (3 * v[0]) % 5, "i4 = 3 i2");
        }
    }

    #[test]
    fn twist_four_system_nu5() {
        // params: n14, n32, m14, m32 (columns 0..4); unknowns i2,i3,i4
        let rows: Vec<(&[i64], &[i64], i64)> = vec![
            (&[3, 1, 0], &[-1, 0, 0, 0], 0), // n14 = 3 i2 + i3
            (&[1, 0, 3], &[0, 1, 0, 0], 0),  // -n32 = i2 + 3 i4
            (&[0, 1, 1], &[0, -1, 0, 0], 0), // n32 = i3 + i4
            (&[1, 3, 1], &[1, 0, 0, 0], 0),  // -n14 = i2 + 3 i3 + i4
            (&[1, 2, 0], &[0, 0, -1, 0], 0), // m14 = i2 + 2 i3
            (&[2, 0, 1], &[0, 0, 0, 1], 0),  // -m32 = 2 i2 + i4
            (&[0, 2, 2], &[0, 0, 0, -1], 0), // m32 = 2 i3 + 2 i4
            (&[2, 1, 2], &[0, 0, 1, 0], 0),  // -m14 = 2 i2 + i3 + 2 i4
        ];
        let s = sys(5, 3, 4, &rows).solve();
        // constraints among parameters: n32 = 2 n14, m14 = 2 n14, m32 = 4 n14
        let pars = s.iter_pars_solutions().unwrap();
        assert_eq!(pars.len(), 5);
        for p in &pars {
            let n14 = p[0];
            assert_eq!(p[1], (2 * n14) % 5);
            assert_eq!(p[2], (2 * n14) % 5);
            assert_eq!(p[3], (4 * n14) % 5);
        }
        // i3 = 2 i2 + n14 and i4 = 3 i2 + n14, pointwise at every parameter
        // assignment (the canonical form is free to choose its own pivots)
        let sols = s.iter_solutions().unwrap();
        assert_eq!(sols.len(), 5);
        for p in &pars {
            for a in &sols {
                let i2 = a[0].eval(p);
                let i3 = a[1].eval(p);
                let i4 = a[2].eval(p);
                assert_eq!(i3, (2 * i2 + p[0]) % 5);
                assert_eq!(i4, (3 * i2 + p[0]) % 5);
            }
        }
        // constraints never mention unknowns, directly on the data structure
        for row in s.param_constraints() {
            assert!(row[..3].iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn inconsistent_parameter_constraint_mod_4() {
        // 2 n = 1 mod 4 has no parameter assignment
        let rows: Vec<(&[i64], &[i64], i64)> = vec![(&[0], &[2], -1)];
        let s = sys(4, 1, 1, &rows).solve();
        assert_eq!(s.iter_pars_solutions().unwrap().len(), 0);
    }

    #[test]
    fn half_free_direction_mod_4() {
        // 2x = 0 mod 4: x in {0, 2}; the solver must respect the subgroup
        let rows: Vec<(&[i64], &[i64], i64)> = vec![(&[2], &[], 0)];
        let s = sys(4, 1, 0, &rows).solve();
        let sols = s.iter_solutions().unwrap();
        let vals: Vec<u32> = sols.iter().map(|a| a[0].konst).collect();
        assert_eq!(vals, vec![0, 2]);
    }

    #[test]
    fn joint_enumeration_matches_brute_force() {
        // random small systems over all three moduli, including mod 4
        let mut s = 0x12345678u64;
        let mut next = |m: u64| {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((s >> 33) % m) as i64
        };
        for &m in &[3u32, 4, 5] {
            for _ in 0..120 {
                let nu = 2usize;
                let np = 2usize;
                let nrows = 1 + (next(3) as usize);
                let rows: Vec<(Vec<i64>, Vec<i64>, i64)> = (0..nrows)
                    .map(|_| {
                        (
                            (0..nu).map(|_| next(m as u64)).collect(),
                            (0..np).map(|_| next(m as u64)).collect(),
                            next(m as u64),
                        )
                    })
                    .collect();
                let rowrefs: Vec<(&[i64], &[i64], i64)> = rows
                    .iter()
                    .map(|(u, p, k)| (u.as_slice(), p.as_slice(), *k))
                    .collect();
                let sysm = sys(m, nu, np, &rowrefs);
                let sol = sysm.solve();
                // brute force over the joint space
                let mut joint = std::collections::BTreeSet::new();
                for xi in 0..(m as usize).pow(nu as u32) {
                    for pi in 0..(m as usize).pow(np as u32) {
                        let mut x = vec![0u32; nu];
                        let mut t = xi;
                        for c in 0..nu {
                            x[c] = (t % m as usize) as u32;
                            t /= m as usize;
                        }
                        let mut p = vec![0u32; np];
                        let mut t = pi;
                        for c in 0..np {
                            p[c] = (t % m as usize) as u32;
                            t /= m as usize;
                        }
                        let ok = rows.iter().all(|(u, pc, k)| {
                            let mut acc = *k;
                            for c in 0..nu {
                                acc += u[c] * x[c] as i64;
                            }
                            for c in 0..np {
                                acc += pc[c] * p[c] as i64;
                            }
                            acc.rem_euclid(m as i64) == 0
                        });
                        if ok {
                            joint.insert((x, p));
                        }
                    }
                }
                let mut got = std::collections::BTreeSet::new();
                if !sol.is_empty() {
                    for p in sol.iter_pars_solutions().unwrap() {
                        let xs = sol.solutions_at(&p).unwrap();
                        if !xs.is_empty() {
                            for x in xs.enumerate().unwrap() {
                                got.insert((x, p.clone()));
                            }
                        }
                    }
                }
                assert_eq!(got, joint);
            }
        }
    }

    #[test]
    fn case_equation_assembly() {
        let case = CaseConfig::builtin(5).unwrap();
        let eqs = case.equations_dictionary(0).unwrap();
        let s = ParamSystem::from_equations(&case, &eqs);
        assert_eq!(s.params.len(), 0);
        assert_eq!(s.rows.len(), 8);
    }
}
