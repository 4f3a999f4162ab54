//! Torsion certification: lower bounds from explicit points, upper bounds from
//! reductions, and a bounded box search for small points.

use num_integer::Integer;

use super::reduce::{torsion_bound, NumberFieldElement, TorsionBound, DEFAULT_BOUND_PRIMES};
use super::{EllCurve, EllError, EllPoint, PointOrder, TorsionGroup, DEFAULT_ORDER_CAP};
use crate::arith::is_prime;
use crate::ffield::{sqrt_mod_p, FpElem};
use crate::qfield::{kronecker, BaseField};

/// Box for `x = (u + v√d)/w`: `|u| ≤ max_u`, `|v| ≤ max_v`, `1 ≤ w ≤ max_w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_u: i64,
    pub max_v: i64,
    pub max_w: i64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_u: 50,
            max_v: 50,
            max_w: 64,
        }
    }
}

impl SearchBudget {
    pub fn small() -> Self {
        SearchBudget {
            max_u: 12,
            max_v: 12,
            max_w: 8,
        }
    }
}

/// Local square test at a split prime `ℓ` under one embedding of `√d`.
struct LocalFilter {
    ell: u64,
    coeffs: Vec<u64>,
    sqrt_d: u64,
    squares: Vec<bool>,
}

impl LocalFilter {
    fn passes(&self, u: i64, v: i64, w: i64) -> bool {
        let ell = self.ell as i64;
        let w = w.rem_euclid(ell) as u64;
        if w == 0 {
            return true;
        }
        let winv = FpElem::new(w, self.ell).inv_value();
        let num = (u.rem_euclid(ell) as u64 + v.rem_euclid(ell) as u64 * self.sqrt_d) % self.ell;
        let x = num * winv % self.ell;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (acc * x + c) % self.ell;
        }
        self.squares[acc as usize]
    }
}

impl FpElem {
    fn inv_value(&self) -> u64 {
        use crate::field::FieldElement;
        self.inv().map(|i| i.value()).unwrap_or(0)
    }
}

fn local_filters<F: NumberFieldElement>(
    base: BaseField,
    poly: &[F],
    wanted: usize,
) -> Vec<LocalFilter> {
    let mut filters = Vec::new();
    let mut ell = 3u64;
    let mut primes_used = 0;
    while primes_used < wanted && ell < 400 {
        ell += 2;
        if !is_prime(ell) {
            continue;
        }
        let roots: Vec<u64> = match base {
            BaseField::Rationals => vec![0],
            BaseField::Quadratic(k) => {
                if kronecker(k.d(), ell as i64) != Ok(1) {
                    continue;
                }
                let s = sqrt_mod_p(FpElem::from_i64(k.d(), ell))
                    .expect("split prime")
                    .value();
                vec![s, ell - s]
            }
        };
        let mut squares = vec![false; ell as usize];
        for y in 0..ell {
            squares[(y * y % ell) as usize] = true;
        }
        let mut ok = true;
        let mut these = Vec::new();
        for s in roots {
            let coeffs: Option<Vec<u64>> = poly.iter().map(|c| c.image_mod(ell, s)).collect();
            match coeffs {
                Some(coeffs) => these.push(LocalFilter {
                    ell,
                    coeffs,
                    sqrt_d: s,
                    squares: squares.clone(),
                }),
                None => ok = false,
            }
        }
        if ok {
            filters.extend(these);
            primes_used += 1;
        }
    }
    filters
}

/// All points `(x, y)` on `y² + h(x)·y = f(x)` with `x` in the box, where the
/// model is given through `h` and `disc_poly = h² + 4f` (ascending coefficients).
pub fn search_points<F: NumberFieldElement>(
    sample: &F,
    h: &[F],
    disc_poly: &[F],
    budget: SearchBudget,
) -> Vec<(F, F)> {
    let base = sample.base_field();
    let filters = local_filters(base, disc_poly, 6);
    let max_v = match base {
        BaseField::Rationals => 0,
        BaseField::Quadratic(_) => budget.max_v,
    };
    let eval = |poly: &[F], x: &F| {
        let mut acc = x.zero_like();
        for c in poly.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    };
    let two_inv = sample.from_int_like(2).inv().expect("characteristic zero");
    let mut out = Vec::new();
    for w in 1..=budget.max_w {
        for v in -max_v..=max_v {
            for u in -budget.max_u..=budget.max_u {
                if u.gcd(&v).gcd(&w) != 1 {
                    continue;
                }
                if !filters.iter().all(|f| f.passes(u, v, w)) {
                    continue;
                }
                let x = sample.from_box(u, v, w);
                let disc = eval(disc_poly, &x);
                let Some(root) = disc.sqrt() else { continue };
                let hx = eval(h, &x);
                let y1 = (root.clone() - hx.clone()) * two_inv.clone();
                out.push((x.clone(), y1));
                if !root.is_zero() {
                    let y2 = (-root - hx) * two_inv.clone();
                    out.push((x, y2));
                }
            }
        }
    }
    out
}

use crate::field::FieldElement;

impl<F: NumberFieldElement> EllCurve<F> {
    /// Affine points with `x` in the search box.
    pub fn search(&self, budget: SearchBudget) -> Vec<EllPoint<F>> {
        let [a1, _, a3, _, _] = self.a_invariants();
        let h = vec![a3.clone(), a1.clone()];
        search_points(a1, &h, &self.y_discriminant_poly(), budget)
            .into_iter()
            .map(|(x, y)| EllPoint::Affine(x, y))
            .collect()
    }
}

/// The subgroup generated by `gens` and its structure `ℤ/m ⊕ ℤ/n`.
pub fn generated_group<F: FieldElement>(
    e: &EllCurve<F>,
    gens: &[EllPoint<F>],
) -> Result<(TorsionGroup, Vec<EllPoint<F>>), EllError> {
    let cap = DEFAULT_ORDER_CAP;
    let mut elements = vec![EllPoint::Infinity];
    for g in gens {
        if !e.contains(g) {
            return Err(EllError::NotOnCurve);
        }
        if elements.contains(g) {
            continue;
        }
        // close under adding g
        let mut frontier = elements.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for p in &frontier {
                let s = e.add(p, g);
                if !elements.contains(&s) {
                    elements.push(s.clone());
                    next.push(s);
                    if elements.len() > cap as usize {
                        return Err(EllError::NotTorsion(cap));
                    }
                }
            }
            frontier = next;
        }
    }
    let mut exponent = 1u32;
    for p in &elements {
        match e.point_order(p, cap)? {
            PointOrder::Finite(n) => exponent = exponent.lcm(&n),
            PointOrder::OverCap => return Err(EllError::NotTorsion(cap)),
        }
    }
    let size = elements.len() as u32;
    let group = TorsionGroup::new(size / exponent, exponent)?;
    Ok((group, elements))
}

#[derive(Clone, Debug)]
pub struct TorsionCertificate<F> {
    /// Group generated by the known torsion points.
    pub lower: TorsionGroup,
    pub elements: Vec<EllPoint<F>>,
    pub upper_order: u64,
    pub bound: TorsionBound,
    /// Points found by the search whose order exceeds the cap.
    pub non_torsion: Vec<EllPoint<F>>,
}

impl<F> TorsionCertificate<F> {
    pub fn exact(&self) -> bool {
        self.lower.order() as u64 == self.upper_order
    }
}

/// Certifies torsion from supplied points plus an optional box search, with
/// the reduction bound over [`DEFAULT_BOUND_PRIMES`] as the upper bound.
pub fn torsion_certify<F: NumberFieldElement>(
    e: &EllCurve<F>,
    candidates: &[EllPoint<F>],
    search: Option<SearchBudget>,
) -> Result<TorsionCertificate<F>, EllError> {
    if e.is_singular() {
        return Err(EllError::Singular);
    }
    if candidates.iter().any(|p| !e.contains(p)) {
        return Err(EllError::NotOnCurve);
    }
    let bound = torsion_bound(e, &DEFAULT_BOUND_PRIMES)?;
    let mut torsion = Vec::new();
    let mut non_torsion = Vec::new();
    let found = search.map(|b| e.search(b)).unwrap_or_default();
    for p in candidates.iter().chain(found.iter()) {
        match e.point_order(p, DEFAULT_ORDER_CAP)? {
            PointOrder::Finite(n) if bound.bound % n as u64 == 0 => torsion.push(p.clone()),
            PointOrder::Finite(n) => {
                panic!(
                    "point of order {n} contradicts torsion bound {}",
                    bound.bound
                )
            }
            PointOrder::OverCap => non_torsion.push(p.clone()),
        }
    }
    let (lower, elements) = generated_group(e, &torsion)?;
    Ok(TorsionCertificate {
        lower,
        elements,
        upper_order: bound.bound,
        bound,
        non_torsion,
    })
}
