//! Boundary dynamics on the contact set: iterate-out points, cycles and
//! lead-in sets.

use alloc::vec;
use alloc::vec::Vec;

use crate::symbol::Symbol;
use crate::{Error, Result, Tolerances, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryStep {
    /// `φ(ζ)` is (the member of `E(φ)` at) this point.
    Lands(C64),
    /// `φ(ζ)` lies in the open disk, or on the circle outside `E(φ)`.
    Exits,
}

/// One step of boundary iteration, matched against `contact`.
pub fn boundary_step(
    s: &Symbol,
    contact: &[C64],
    zeta: C64,
    tol: &Tolerances,
) -> Result<BoundaryStep> {
    Ok(match step_index(s, contact, zeta, tol)? {
        Some(j) => BoundaryStep::Lands(contact[j]),
        None => BoundaryStep::Exits,
    })
}

fn step_index(s: &Symbol, contact: &[C64], zeta: C64, tol: &Tolerances) -> Result<Option<usize>> {
    let image = s.second_order_data(zeta, tol)?.value();
    let mut hits = contact
        .iter()
        .enumerate()
        .filter(|(_, e)| (*e - image).norm() <= tol.match_tol)
        .map(|(j, _)| j);
    let first = hits.next();
    if hits.next().is_some() {
        return Err(Error::AmbiguousMatch(zeta));
    }
    Ok(first)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cycle {
    points: Vec<C64>,
    multiplier: f64,
}

impl Cycle {
    /// `φ` maps each point to the next, the last back to the first.
    pub fn points(&self) -> &[C64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `(φ^{[ℓ]})'` at any point of the cycle.
    pub fn multiplier(&self) -> f64 {
        self.multiplier
    }

    pub fn contains(&self, z: C64, tol: f64) -> bool {
        self.points.iter().any(|p| (p - z).norm() <= tol)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitPartition {
    contact: Vec<C64>,
    iterate_out: Vec<C64>,
    cycles: Vec<Cycle>,
    lead_ins: Vec<Vec<C64>>,
    /// Index into `contact` of each point's image, when it lands in `E(φ)`.
    next: Vec<Option<usize>>,
}

impl OrbitPartition {
    pub fn contact(&self) -> &[C64] {
        &self.contact
    }

    pub fn iterate_out(&self) -> &[C64] {
        &self.iterate_out
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    /// Lead-in set of cycle `k`.
    pub fn lead_ins(&self, k: usize) -> &[C64] {
        &self.lead_ins[k]
    }

    /// Lead-ins of cycle `k` that no other lead-in of that cycle maps to.
    pub fn primitive_lead_ins(&self, k: usize) -> Vec<C64> {
        let idx = |z: &C64| {
            self.contact
                .iter()
                .position(|e| e == z)
                .expect("member of E")
        };
        let members: Vec<usize> = self.lead_ins[k].iter().map(idx).collect();
        members
            .iter()
            .filter(|&&m| !members.iter().any(|&o| self.next[o] == Some(m)))
            .map(|&m| self.contact[m])
            .collect()
    }
}

/// Decomposes `E(φ)` by forward iteration with first-repeat bookkeeping.
pub fn partition(s: &Symbol, tol: &Tolerances) -> Result<OrbitPartition> {
    let contact = s.contact_set()?;
    partition_of(s, contact, tol)
}

pub(crate) fn partition_of(
    s: &Symbol,
    contact: Vec<C64>,
    tol: &Tolerances,
) -> Result<OrbitPartition> {
    let n = contact.len();
    for i in 0..n {
        for j in 0..i {
            if (contact[i] - contact[j]).norm() < 10.0 * tol.match_tol {
                return Err(Error::PointsTooClose);
            }
        }
    }
    let next = contact
        .iter()
        .map(|&z| step_index(s, &contact, z, tol))
        .collect::<Result<Vec<_>>>()?;

    let periodic: Vec<bool> = (0..n)
        .map(|i| {
            let mut j = i;
            for _ in 0..n {
                match next[j] {
                    Some(k) if k == i => return true,
                    Some(k) => j = k,
                    None => return false,
                }
            }
            false
        })
        .collect();

    let mut cycle_of = vec![None; n];
    let mut cycles = Vec::new();
    for i in 0..n {
        if !periodic[i] || cycle_of[i].is_some() {
            continue;
        }
        let mut members = vec![i];
        let mut j = next[i].expect("periodic");
        while j != i {
            members.push(j);
            j = next[j].expect("periodic");
        }
        for &m in &members {
            cycle_of[m] = Some(cycles.len());
        }
        let points: Vec<C64> = members.iter().map(|&m| contact[m]).collect();
        let multiplier = cycle_multiplier(s, &points, tol)?;
        cycles.push(Cycle { points, multiplier });
    }

    let mut iterate_out = Vec::new();
    let mut lead_ins = vec![Vec::new(); cycles.len()];
    for i in 0..n {
        if periodic[i] {
            continue;
        }
        let mut j = i;
        let mut target = None;
        for _ in 0..n {
            match next[j] {
                Some(k) => {
                    if let Some(c) = cycle_of[k] {
                        target = Some(c);
                        break;
                    }
                    j = k;
                }
                None => break,
            }
        }
        match target {
            Some(c) => lead_ins[c].push(contact[i]),
            None => iterate_out.push(contact[i]),
        }
    }

    Ok(OrbitPartition {
        contact,
        iterate_out,
        cycles,
        lead_ins,
        next,
    })
}

/// `(φ^{[ℓ]})'(ξ)` for a cycle listed in iteration order, by the chain rule.
pub fn cycle_multiplier(s: &Symbol, points: &[C64], tol: &Tolerances) -> Result<f64> {
    let mut product = C64::new(1.0, 0.0);
    let mut modulus = 1.0;
    for &z in points {
        let d1 = s.second_order_data(z, tol)?.d1();
        product *= d1;
        modulus *= d1.norm();
    }
    if product.re <= 0.0 || product.im.abs() > 1e-6 * modulus {
        return Err(Error::Inconsistent(alloc::format!(
            "cycle derivative {product} is not real and positive"
        )));
    }
    if points.len() > 1 && modulus <= 1.0 + tol.eps {
        return Err(Error::CycleNotExpanding {
            length: points.len(),
            multiplier: modulus,
        });
    }
    Ok(modulus)
}
