//! Recurrent integration of the SPPS coefficients for the four Jost solutions.
//!
//! Each family is driven by one seed solution `m` (f, f̃, g or g̃) and its
//! companion `aux` (the other weighted component). Every step needs one
//! exponentially discounted tail integral of the source term followed by one
//! plain tail integral, and never divides by `q` or `r`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::direct::{mobius_z, mobius_ztil};
use crate::error::{Error, Result};
use crate::numerics::{Grid, PanelRule};
use crate::potential::PotentialPair;
use crate::seed::SeedSet;

pub const OVERFLOW_LIMIT: f64 = 1e100;

const C0: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// ψ, series in `z`.
    A,
    /// ψ̃, series in `z̃`.
    Atil,
    /// φ, series in `z`.
    B,
    /// φ̃, series in `z̃`.
    Btil,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::A, Family::Atil, Family::B, Family::Btil];

    pub fn name(self) -> &'static str {
        match self {
            Family::A => "a",
            Family::Atil => "atil",
            Family::B => "b",
            Family::Btil => "btil",
        }
    }

    /// True for the families expanded in `z̃`, valid on `Im ρ ≤ 0`.
    pub fn is_tilde(self) -> bool {
        matches!(self, Family::Atil | Family::Btil)
    }
}

/// Nodes at which full coefficient rows are kept.
#[derive(Debug, Clone, PartialEq)]
pub enum Retain {
    /// Only `x = 0`, all the direct problem needs.
    Origin,
    Nodes(Vec<usize>),
    /// Every node. Memory grows like `4 (N + 1) len(grid)` complex values.
    All,
}

#[derive(Debug, Clone)]
pub struct CoefficientTable {
    family: Family,
    order: usize,
    grid: Arc<Grid>,
    nodes: Vec<usize>,
    /// `c1[n][k]` is the first component of coefficient `n` at `nodes[k]`.
    c1: Vec<Vec<Complex64>>,
    c2: Vec<Vec<Complex64>>,
    c1_prime: Vec<Vec<Complex64>>,
    c2_prime: Vec<Vec<Complex64>>,
    /// `max |c1_n|` over the far boundary node, for every `n`.
    boundary_c1: Vec<f64>,
}

impl CoefficientTable {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn retained_nodes(&self) -> &[usize] {
        &self.nodes
    }

    fn slot(&self, node: usize) -> Result<usize> {
        self.nodes.binary_search(&node).map_err(|_| {
            Error::InvalidInput(format!("node {node} was not retained by the {} table", self.family.name()))
        })
    }

    /// `(c1_n, c2_n)` at a retained node for `n = 0..=N`.
    pub fn coefficients_at(&self, node: usize) -> Result<Vec<[Complex64; 2]>> {
        let k = self.slot(node)?;
        Ok((0..=self.order).map(|n| [self.c1[n][k], self.c2[n][k]]).collect())
    }

    /// `(c1'_n, c2'_n)` at a retained node.
    pub fn derivatives_at(&self, node: usize) -> Result<Vec<[Complex64; 2]>> {
        let k = self.slot(node)?;
        Ok((0..=self.order).map(|n| [self.c1_prime[n][k], self.c2_prime[n][k]]).collect())
    }

    /// Row `n` of the first component across the retained nodes.
    pub fn c1_row(&self, n: usize) -> &[Complex64] {
        &self.c1[n]
    }

    pub fn c2_row(&self, n: usize) -> &[Complex64] {
        &self.c2[n]
    }

    pub fn c1_prime_row(&self, n: usize) -> &[Complex64] {
        &self.c1_prime[n]
    }

    pub fn c2_prime_row(&self, n: usize) -> &[Complex64] {
        &self.c2_prime[n]
    }

    /// `|c1_n|` at the boundary the family is anchored to (right for the
    /// ψ families, left for the φ families).
    pub fn boundary_c1(&self) -> &[f64] {
        &self.boundary_c1
    }

    /// Sum `Σ (−w)ⁿ cₙ` of both components at a retained node.
    pub fn series_at(&self, node: usize, w: Complex64) -> Result<[Complex64; 2]> {
        let k = self.slot(node)?;
        let mut s = [C0; 2];
        for n in (0..=self.order).rev() {
            s[0] = s[0] * (-w) + self.c1[n][k];
            s[1] = s[1] * (-w) + self.c2[n][k];
        }
        Ok(s)
    }
}

/// The per-family roles in the shared recurrence.
struct Roles<'a> {
    /// Seed component `m`, never zero.
    m: &'a [Complex64],
    /// Companion component, `m' = λ·aux`.
    aux: &'a [Complex64],
    /// Potential inside the outer integral.
    lambda: &'a [Complex64],
    /// Potential in the source term.
    kappa: &'a [Complex64],
    /// `+1` for the ψ families (tails to the right), `−1` for φ.
    sigma: f64,
    /// Value of `m` at its anchoring boundary.
    m_ref: Complex64,
    /// Whether `(c1, c2)` is `(S, P)` or `(P, S)`.
    secondary_first: bool,
}

fn roles<'a>(family: Family, p: &'a PotentialPair, s: &'a SeedSet) -> Roles<'a> {
    let (q, r) = (p.q.values(), p.r.values());
    let one = Complex64::new(1.0, 0.0);
    match family {
        Family::A => Roles {
            m: s.f.values(),
            aux: s.psi1_half.values(),
            lambda: r,
            kappa: q,
            sigma: 1.0,
            m_ref: one,
            secondary_first: true,
        },
        Family::Atil => Roles {
            m: s.ftil.values(),
            aux: s.psitil2_half.values(),
            lambda: q,
            kappa: r,
            sigma: 1.0,
            m_ref: one,
            secondary_first: false,
        },
        Family::B => Roles {
            m: s.g.values(),
            aux: s.phi2_half.values(),
            lambda: q,
            kappa: r,
            sigma: -1.0,
            m_ref: one,
            secondary_first: false,
        },
        Family::Btil => Roles {
            m: s.gtil.values(),
            aux: s.phitil1_half.values(),
            lambda: r,
            kappa: q,
            sigma: -1.0,
            m_ref: -one,
            secondary_first: true,
        },
    }
}

fn retained(retain: &Retain, grid: &Grid) -> Result<Vec<usize>> {
    let mut nodes = match retain {
        Retain::Origin => vec![grid.zero_index()],
        Retain::All => (0..grid.len()).collect(),
        Retain::Nodes(v) => v.clone(),
    };
    nodes.sort_unstable();
    nodes.dedup();
    if let Some(&bad) = nodes.iter().find(|&&i| i >= grid.len()) {
        return Err(Error::InvalidInput(format!("node index {bad} outside the grid")));
    }
    Ok(nodes)
}

struct Row {
    s: Vec<Complex64>,
    p: Vec<Complex64>,
    sp: Vec<Complex64>,
    pp: Vec<Complex64>,
}

fn check_row(family: Family, n: usize, row: &Row) -> Result<()> {
    let worst = [&row.s, &row.p, &row.sp, &row.pp]
        .iter()
        .flat_map(|v| v.iter())
        .fold(0.0f64, |acc, v| {
            let m = v.norm();
            if m.is_nan() {
                f64::INFINITY
            } else {
                acc.max(m)
            }
        });
    if worst > OVERFLOW_LIMIT {
        return Err(Error::Overflow {
            family: family.name(),
            n,
            magnitude: worst,
        });
    }
    Ok(())
}

pub fn compute_family(family: Family, p: &PotentialPair, seeds: &SeedSet, order: usize) -> Result<CoefficientTable> {
    compute_family_retaining(family, p, seeds, order, &Retain::Origin)
}

pub fn compute_family_retaining(
    family: Family,
    p: &PotentialPair,
    seeds: &SeedSet,
    order: usize,
    retain: &Retain,
) -> Result<CoefficientTable> {
    let grid = p.grid().clone();
    if **seeds.grid() != *grid {
        return Err(Error::Shape("seeds and potential live on different grids".into()));
    }
    let nodes = retained(retain, &grid)?;
    let len = grid.len();
    let rl = roles(family, p, seeds);
    let rule = PanelRule::new(grid.h());
    let right = !matches!(family, Family::B | Family::Btil);
    let far = if right { len - 1 } else { 0 };

    let inv_m: Vec<Complex64> = rl.m.iter().map(|v| v.inv()).collect();
    // λ/m², λ/m and m'/m = λ·aux/m.
    let lam_m2: Vec<Complex64> = (0..len).map(|i| rl.lambda[i] * inv_m[i] * inv_m[i]).collect();
    let lam_m: Vec<Complex64> = (0..len).map(|i| rl.lambda[i] * inv_m[i]).collect();
    let dm_m: Vec<Complex64> = (0..len).map(|i| lam_m[i] * rl.aux[i]).collect();

    let mut row = Row {
        s: rl.aux.to_vec(),
        p: rl.m.iter().map(|v| v - rl.m_ref).collect(),
        sp: (0..len).map(|i| rl.aux[i] * rl.sigma + rl.kappa[i] * rl.m[i]).collect(),
        pp: (0..len).map(|i| rl.lambda[i] * rl.aux[i]).collect(),
    };

    let mut table = CoefficientTable {
        family,
        order,
        grid: grid.clone(),
        c1: Vec::with_capacity(order + 1),
        c2: Vec::with_capacity(order + 1),
        c1_prime: Vec::with_capacity(order + 1),
        c2_prime: Vec::with_capacity(order + 1),
        boundary_c1: Vec::with_capacity(order + 1),
        nodes,
    };
    let store = |t: &mut CoefficientTable, row: &Row| {
        let pick = |v: &[Complex64]| -> Vec<Complex64> { t.nodes.iter().map(|&i| v[i]).collect() };
        let (c1, c2, c1p, c2p) = if rl.secondary_first {
            (pick(&row.s), pick(&row.p), pick(&row.sp), pick(&row.pp))
        } else {
            (pick(&row.p), pick(&row.s), pick(&row.pp), pick(&row.sp))
        };
        let first = if rl.secondary_first { &row.s } else { &row.p };
        t.boundary_c1.push(first[far].norm());
        t.c1.push(c1);
        t.c2.push(c2);
        t.c1_prime.push(c1p);
        t.c2_prime.push(c2p);
    };
    check_row(family, 0, &row)?;
    store(&mut table, &row);

    let mut src = vec![C0; len];
    let mut disc = vec![C0; len];
    let mut outer = vec![C0; len];
    let mut tmp = vec![C0; len];
    for n in 1..=order {
        for (i, v) in src.iter_mut().enumerate() {
            *v = (row.sp[i] + row.s[i] * rl.sigma - rl.kappa[i] * row.p[i]) * rl.m[i];
        }
        if right {
            rule.discounted_tail_right_into(&src, &mut disc)?;
        } else {
            rule.discounted_tail_left_into(&src, &mut disc)?;
        }
        for i in 0..len {
            tmp[i] = lam_m2[i] * disc[i];
        }
        if right {
            rule.tail_right_into(&tmp, &mut outer)?;
        } else {
            rule.tail_left_into(&tmp, &mut outer)?;
        }
        for i in 0..len {
            let p_new = rl.m[i] * outer[i];
            let pp_new = dm_m[i] * p_new - lam_m[i] * disc[i] * rl.sigma;
            let s_new = (rl.aux[i] * p_new - disc[i] * rl.sigma) * inv_m[i];
            let sp_new = row.sp[i] + (s_new + row.s[i]) * rl.sigma + rl.kappa[i] * (p_new - row.p[i]);
            row.s[i] = s_new;
            row.p[i] = p_new;
            row.sp[i] = sp_new;
            row.pp[i] = pp_new;
        }
        check_row(family, n, &row)?;
        store(&mut table, &row);
    }
    Ok(table)
}

/// All four families, computed concurrently when the `parallel` feature is on.
#[derive(Debug, Clone)]
pub struct FamilyTables {
    pub a: CoefficientTable,
    pub atil: CoefficientTable,
    pub b: CoefficientTable,
    pub btil: CoefficientTable,
}

impl FamilyTables {
    pub fn order(&self) -> usize {
        self.a.order()
    }

    pub fn get(&self, family: Family) -> &CoefficientTable {
        match family {
            Family::A => &self.a,
            Family::Atil => &self.atil,
            Family::B => &self.b,
            Family::Btil => &self.btil,
        }
    }
}

pub fn compute_all(p: &PotentialPair, seeds: &SeedSet, order: usize, retain: &Retain) -> Result<FamilyTables> {
    let run = |f: &Family| compute_family_retaining(*f, p, seeds, order, retain);
    #[cfg(feature = "parallel")]
    let out: Vec<Result<CoefficientTable>> = {
        use rayon::prelude::*;
        Family::ALL.par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let out: Vec<Result<CoefficientTable>> = Family::ALL.iter().map(run).collect();
    let mut it = out.into_iter();
    Ok(FamilyTables {
        a: it.next().unwrap()?,
        atil: it.next().unwrap()?,
        b: it.next().unwrap()?,
        btil: it.next().unwrap()?,
    })
}

/// Truncated-series value of the family's Jost solution at a retained node.
pub fn evaluate_jost(table: &CoefficientTable, rho: Complex64, node: usize) -> Result<[Complex64; 2]> {
    const SLACK: f64 = 1e-12;
    let tilde = table.family.is_tilde();
    if (!tilde && rho.im < -SLACK) || (tilde && rho.im > SLACK) {
        return Err(Error::Domain {
            family: table.family.name(),
            rho,
        });
    }
    let w = if tilde { mobius_ztil(rho)? } else { mobius_z(rho)? };
    let x = table.grid.nodes()[node];
    let s = table.series_at(node, w)?;
    let (base, phase) = match table.family {
        Family::A => ([C0, Complex64::new(1.0, 0.0)], I * rho * x),
        Family::Atil => ([Complex64::new(1.0, 0.0), C0], -I * rho * x),
        Family::B => ([Complex64::new(1.0, 0.0), C0], -I * rho * x),
        Family::Btil => ([C0, Complex64::new(-1.0, 0.0)], I * rho * x),
    };
    let e = phase.exp();
    Ok([(base[0] + (w + 1.0) * s[0]) * e, (base[1] + (w + 1.0) * s[1]) * e])
}
