//! Exact decision of polynomial identities on structure-constant algebras.
//!
//! Every check expands the identity on generic vectors whose coordinates are
//! fresh indeterminates, so a verdict of `Holds` is a proof over any infinite
//! field of characteristic zero, symbolically in the algebra's parameters.

use crate::algebra::{AlgebraDef, PairAlgebraDef};
use crate::error::{Error, Result};
use crate::scalar::{MultiPoly, Scalar};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityName {
    Flexible,
    Jordan,
    NcJordan,
    Associative,
    Commutative,
    Anticommutative,
    Standard1,
    Standard2,
    Standard,
    Kokoris,
    GenericPoissonCompat,
    GenericPoissonJordan,
    FourthPowerAssoc,
}

impl IdentityName {
    pub const ALL: &'static [IdentityName] = &[
        IdentityName::Flexible,
        IdentityName::Jordan,
        IdentityName::NcJordan,
        IdentityName::Associative,
        IdentityName::Commutative,
        IdentityName::Anticommutative,
        IdentityName::Standard1,
        IdentityName::Standard2,
        IdentityName::Standard,
        IdentityName::Kokoris,
        IdentityName::GenericPoissonCompat,
        IdentityName::GenericPoissonJordan,
        IdentityName::FourthPowerAssoc,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            IdentityName::Flexible => "flexible",
            IdentityName::Jordan => "jordan",
            IdentityName::NcJordan => "nc_jordan",
            IdentityName::Associative => "associative",
            IdentityName::Commutative => "commutative",
            IdentityName::Anticommutative => "anticommutative",
            IdentityName::Standard1 => "standard1",
            IdentityName::Standard2 => "standard2",
            IdentityName::Standard => "standard",
            IdentityName::Kokoris => "kokoris",
            IdentityName::GenericPoissonCompat => "generic_poisson_compat",
            IdentityName::GenericPoissonJordan => "generic_poisson_jordan",
            IdentityName::FourthPowerAssoc => "fourth_power_assoc",
        }
    }

    /// Number of generic vectors the expansion introduces.
    pub fn arity(&self) -> usize {
        match self {
            IdentityName::FourthPowerAssoc => 1,
            IdentityName::Flexible
            | IdentityName::Jordan
            | IdentityName::NcJordan
            | IdentityName::Commutative
            | IdentityName::Anticommutative => 2,
            IdentityName::Associative
            | IdentityName::Standard1
            | IdentityName::Kokoris
            | IdentityName::GenericPoissonCompat
            | IdentityName::GenericPoissonJordan => 3,
            IdentityName::Standard2 | IdentityName::Standard => 4,
        }
    }

    /// Identities stated on the split pair (o, [.,.]) rather than on the
    /// one-product algebra.
    pub fn is_pair_identity(&self) -> bool {
        matches!(
            self,
            IdentityName::Kokoris
                | IdentityName::GenericPoissonCompat
                | IdentityName::GenericPoissonJordan
        )
    }
}

impl FromStr for IdentityName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityName::ALL
            .iter()
            .copied()
            .find(|i| i.as_str() == s)
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

impl fmt::Display for IdentityName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub enum Verdict {
    Holds,
    /// Zero as a rational function; the listed denominators must not vanish.
    HoldsGenerically { locus: Vec<MultiPoly> },
    Fails { witness: MultiPoly },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        !matches!(self, Verdict::Fails { .. })
    }

    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (f @ Verdict::Fails { .. }, _) => f,
            (_, f @ Verdict::Fails { .. }) => f,
            (Verdict::Holds, v) => v,
            (v, Verdict::Holds) => v,
            (
                Verdict::HoldsGenerically { mut locus },
                Verdict::HoldsGenerically { locus: l2 },
            ) => {
                for p in l2 {
                    if !locus.contains(&p) {
                        locus.push(p);
                    }
                }
                Verdict::HoldsGenerically { locus }
            }
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => write!(f, "Holds"),
            Verdict::HoldsGenerically { locus } => {
                let conds: Vec<String> = locus.iter().map(|p| format!("{p} != 0")).collect();
                write!(f, "HoldsGenerically [{}]", conds.join(", "))
            }
            Verdict::Fails { witness } => write!(f, "Fails (witness {witness})"),
        }
    }
}

fn generic_vec(dim: usize, sigil: &str) -> Vec<Scalar> {
    (1..=dim)
        .map(|i| Scalar::param(&format!("_{sigil}{i}")))
        .collect()
}

/// Denominators of the structure constants that involve parameters; they
/// form the locus outside of which a `Holds` verdict is unconditional.
fn constant_denominators(algs: &[&AlgebraDef]) -> Vec<MultiPoly> {
    let mut out: Vec<MultiPoly> = Vec::new();
    for a in algs {
        for s in a.constants() {
            if s.den().as_constant().is_none() && !out.contains(s.den()) {
                out.push(s.den().clone());
            }
        }
    }
    out
}

fn conclude(residuals: Vec<Vec<Scalar>>, locus: Vec<MultiPoly>) -> Verdict {
    for comp in residuals.iter().flatten() {
        if !comp.is_zero() {
            return Verdict::Fails {
                witness: comp.num().clone(),
            };
        }
    }
    if locus.is_empty() {
        Verdict::Holds
    } else {
        Verdict::HoldsGenerically { locus }
    }
}

fn vec_sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

fn vec_add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

fn associator(a: &AlgebraDef, x: &[Scalar], y: &[Scalar], z: &[Scalar]) -> Vec<Scalar> {
    let xy = a.product(x, y).unwrap();
    let yz = a.product(y, z).unwrap();
    vec_sub(&a.product(&xy, z).unwrap(), &a.product(x, &yz).unwrap())
}

fn check_one_product(a: &AlgebraDef, id: IdentityName) -> Verdict {
    let n = a.dim;
    let locus = constant_denominators(&[a]);
    let x = generic_vec(n, "x");
    let y = generic_vec(n, "y");
    let z = generic_vec(n, "z");
    let w = generic_vec(n, "w");
    let residuals: Vec<Vec<Scalar>> = match id {
        IdentityName::Commutative => {
            vec![vec_sub(&a.product(&x, &y).unwrap(), &a.product(&y, &x).unwrap())]
        }
        IdentityName::Anticommutative => {
            vec![vec_add(&a.product(&x, &y).unwrap(), &a.product(&y, &x).unwrap())]
        }
        IdentityName::Flexible => vec![associator(a, &x, &y, &x)],
        IdentityName::Jordan => {
            let xx = a.product(&x, &x).unwrap();
            vec![associator(a, &xx, &y, &x)]
        }
        IdentityName::NcJordan => {
            return check_one_product(a, IdentityName::Flexible)
                .and(check_one_product(a, IdentityName::Jordan));
        }
        IdentityName::Associative => vec![associator(a, &x, &y, &z)],
        IdentityName::Standard1 => {
            let s = vec_sub(
                &vec_add(&associator(a, &x, &y, &z), &associator(a, &z, &x, &y)),
                &associator(a, &x, &z, &y),
            );
            vec![s]
        }
        IdentityName::Standard2 => {
            let wz = a.product(&w, &z).unwrap();
            let xz = a.product(&x, &z).unwrap();
            let wx = a.product(&w, &x).unwrap();
            let s = vec_add(
                &vec_add(&associator(a, &x, &y, &wz), &associator(a, &w, &y, &xz)),
                &associator(a, &z, &y, &wx),
            );
            vec![s]
        }
        IdentityName::Standard => {
            return check_one_product(a, IdentityName::Standard1)
                .and(check_one_product(a, IdentityName::Standard2));
        }
        IdentityName::FourthPowerAssoc => {
            let xx = a.product(&x, &x).unwrap();
            let xxx = a.product(&xx, &x).unwrap();
            vec![
                associator(a, &x, &x, &x),
                vec_sub(&a.product(&xx, &xx).unwrap(), &a.product(&xxx, &x).unwrap()),
            ]
        }
        IdentityName::Kokoris
        | IdentityName::GenericPoissonCompat
        | IdentityName::GenericPoissonJordan => {
            return check_pair(&a.split(), id);
        }
    };
    conclude(residuals, locus)
}

fn check_pair(p: &PairAlgebraDef, id: IdentityName) -> Verdict {
    let n = p.dim;
    let locus = constant_denominators(&[&p.circ, &p.bracket]);
    let x = generic_vec(n, "x");
    let y = generic_vec(n, "y");
    let z = generic_vec(n, "z");
    match id {
        IdentityName::GenericPoissonCompat => {
            // [x o y, z] = [x, z] o y + x o [y, z]
            let lhs = p
                .bracket
                .product(&p.circ.product(&x, &y).unwrap(), &z)
                .unwrap();
            let rhs = vec_add(
                &p.circ
                    .product(&p.bracket.product(&x, &z).unwrap(), &y)
                    .unwrap(),
                &p.circ
                    .product(&x, &p.bracket.product(&y, &z).unwrap())
                    .unwrap(),
            );
            conclude(vec![vec_sub(&lhs, &rhs)], locus)
        }
        IdentityName::Kokoris => {
            // circle product associative and compatibility identity
            conclude(vec![associator(&p.circ, &x, &y, &z)], locus)
                .and(check_pair(p, IdentityName::GenericPoissonCompat))
        }
        IdentityName::GenericPoissonJordan => {
            // circle product Jordan and compatibility identity
            let xx = p.circ.product(&x, &x).unwrap();
            conclude(vec![associator(&p.circ, &xx, &y, &x)], locus)
                .and(check_pair(p, IdentityName::GenericPoissonCompat))
        }
        // one-product identities on the fused algebra
        other => check_one_product(&p.fuse(), other),
    }
}

/// Input of an identity check: either one product or a split pair.
pub enum CheckTarget<'a> {
    One(&'a AlgebraDef),
    Pair(&'a PairAlgebraDef),
}

pub fn check_identity(target: CheckTarget<'_>, id: IdentityName) -> Verdict {
    match target {
        CheckTarget::One(a) => check_one_product(a, id),
        CheckTarget::Pair(p) => check_pair(p, id),
    }
}

pub fn check_identity_alg(a: &AlgebraDef, id: IdentityName) -> Verdict {
    check_identity(CheckTarget::One(a), id)
}

/// Degree-4 power associativity: (x,x,x) = 0 and (x^2)x^2 = ((x^2)x)x.
/// Over characteristic zero this is the standard criterion through degree 4.
pub fn check_power_associativity_deg4(a: &AlgebraDef) -> Verdict {
    check_one_product(a, IdentityName::FourthPowerAssoc)
}
