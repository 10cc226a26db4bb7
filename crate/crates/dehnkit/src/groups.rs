//! Finite multiplicative closures in GL4(Q), the canonical maximal groups
//! per cusp field, and exact verification of their presentations.

use crate::blocktype::{classify_type, BlockMat, TypeTag};
use crate::catalog;
use crate::exactnum::{rat, Rat};
use crate::linalg::{Mat2Q, Mat4, Poly};
use num::{BigInt, Zero};
use serde::Serialize;
use std::collections::HashMap;

pub const DEFAULT_CLOSURE_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("closure exceeded cap {0}")]
    CapExceeded(usize),
    #[error("generator {0} is singular")]
    SingularGenerator(usize),
    #[error("scenario {scenario} is inconsistent with field D = {d}")]
    ScenarioMismatch { scenario: String, d: i64 },
}

/// A finite multiplication-closed set of 4x4 rational matrices with its
/// generators. Elements are kept in a canonical lexicographic order.
#[derive(Debug, Clone)]
pub struct GroupSet {
    pub elements: Vec<Mat4>,
    pub generators: Vec<Mat4>,
}

fn lex_key(m: &Mat4) -> Vec<(BigInt, BigInt)> {
    m.e.iter()
        .flatten()
        .map(|r| (r.numer().clone(), r.denom().clone()))
        .collect()
}

/// Multiplicative closure of the generators with the identity adjoined.
/// Finite groups close under inversion automatically; inputs that do not
/// close within `cap` elements are rejected.
pub fn closure(gens: &[Mat4], cap: usize) -> Result<GroupSet, GroupError> {
    for (i, g) in gens.iter().enumerate() {
        if g.det().is_zero() {
            return Err(GroupError::SingularGenerator(i));
        }
    }
    let mut index: HashMap<Mat4, usize> = HashMap::new();
    let mut elements: Vec<Mat4> = Vec::new();
    let push = |m: Mat4, elements: &mut Vec<Mat4>, index: &mut HashMap<Mat4, usize>| -> bool {
        if index.contains_key(&m) {
            false
        } else {
            index.insert(m.clone(), elements.len());
            elements.push(m);
            true
        }
    };
    push(Mat4::identity(), &mut elements, &mut index);
    let mut frontier = 0usize;
    while frontier < elements.len() {
        let cur = elements[frontier].clone();
        frontier += 1;
        for g in gens {
            let prod = cur.mul_mat(g);
            if push(prod, &mut elements, &mut index) && elements.len() > cap {
                return Err(GroupError::CapExceeded(cap));
            }
        }
    }
    elements.sort_by_key(lex_key);
    Ok(GroupSet { elements, generators: gens.to_vec() })
}

impl GroupSet {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, m: &Mat4) -> bool {
        self.elements.binary_search_by_key(&lex_key(m), lex_key).is_ok()
    }

    pub fn index_of(&self, m: &Mat4) -> Option<usize> {
        self.elements.binary_search_by_key(&lex_key(m), lex_key).ok()
    }

    /// Index table: `cayley[i][j]` is the position of `elements[i] * elements[j]`.
    pub fn cayley_table(&self) -> Vec<Vec<usize>> {
        self.elements
            .iter()
            .map(|a| {
                self.elements
                    .iter()
                    .map(|b| {
                        self.index_of(&a.mul_mat(b))
                            .expect("closure is closed under multiplication")
                    })
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TypeCensus {
    pub type_i: usize,
    pub type_ii: usize,
    pub type_iii: usize,
    pub untyped: usize,
}

pub fn type_census(g: &GroupSet) -> TypeCensus {
    let mut c = TypeCensus::default();
    for m in &g.elements {
        match classify_type(&BlockMat::from_mat4(m)) {
            TypeTag::TypeI => c.type_i += 1,
            TypeTag::TypeII => c.type_ii += 1,
            TypeTag::TypeIII => c.type_iii += 1,
            TypeTag::Untyped => c.untyped += 1,
        }
    }
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Scenario {
    TypeIOnly,
    TypeIAndII,
    Sqrt3TypeIII,
    Sqrt2TypeIII,
    Sqrt1TypeIIIOrder2,
    Sqrt1TypeIIIPair,
    Generic,
}

impl Scenario {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "TypeI_only" => Scenario::TypeIOnly,
            "TypeI_II" => Scenario::TypeIAndII,
            "sqrt3_III" => Scenario::Sqrt3TypeIII,
            "sqrt2_III" => Scenario::Sqrt2TypeIII,
            "sqrt1_III_order2" => Scenario::Sqrt1TypeIIIOrder2,
            "sqrt1_III_pair" => Scenario::Sqrt1TypeIIIPair,
            "generic" => Scenario::Generic,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::TypeIOnly => "TypeI_only",
            Scenario::TypeIAndII => "TypeI_II",
            Scenario::Sqrt3TypeIII => "sqrt3_III",
            Scenario::Sqrt2TypeIII => "sqrt2_III",
            Scenario::Sqrt1TypeIIIOrder2 => "sqrt1_III_order2",
            Scenario::Sqrt1TypeIIIPair => "sqrt1_III_pair",
            Scenario::Generic => "generic",
        }
    }
}

fn half_identity() -> Mat2Q {
    Mat2Q::identity().scale(&rat(1, 2))
}

fn synth(template: &str, a1: &Mat2Q, a2: &Mat2Q) -> Mat4 {
    catalog::synthesize(template, a1, a2)
        .expect("canonical scenario parameters satisfy the template")
        .whole
}

/// Canonical generator lists per cusp field and scenario. Blocks are
/// companion matrices of the required minimal polynomials.
pub fn maximal_group(d: i64, scenario: Scenario) -> Result<Vec<Mat4>, GroupError> {
    let mismatch = || GroupError::ScenarioMismatch { scenario: scenario.name().into(), d };
    let block = |c0: Rat, c1: Rat| Mat2Q::companion2(&c1, &c0);
    match scenario {
        Scenario::TypeIOnly | Scenario::TypeIAndII => {
            let a = match d {
                -3 => block(rat(1, 1), rat(-1, 1)), // C(x^2 - x + 1)
                -1 => block(rat(1, 1), rat(0, 1)),  // C(x^2 + 1)
                _ => return Err(mismatch()),
            };
            let mut gens = vec![
                Mat4::direct_sum(&a, &Mat2Q::identity()),
                Mat4::direct_sum(&Mat2Q::identity(), &a),
            ];
            if scenario == Scenario::TypeIAndII {
                gens.push(Mat4::anti_sum(&Mat2Q::identity(), &Mat2Q::identity()));
            }
            Ok(gens)
        }
        Scenario::Sqrt3TypeIII => {
            if d != -3 {
                return Err(mismatch());
            }
            let a1 = block(rat(3, 4), rat(-3, 2)); // C(x^2 - 3/2 x + 3/4)
            let m = synth("x3-2x2+2x-1.III", &a1, &half_identity());
            Ok(vec![m, Mat4::iota(), Mat4::identity().neg()])
        }
        Scenario::Sqrt2TypeIII => {
            if d != -2 {
                return Err(mismatch());
            }
            let a1 = block(rat(3, 4), rat(-1, 1)); // C(x^2 - x + 3/4)
            let m = synth("x2-x+1.III.3", &a1, &half_identity());
            Ok(vec![m, Mat4::iota(), Mat4::identity().neg()])
        }
        Scenario::Sqrt1TypeIIIOrder2 => {
            if d != -1 {
                return Err(mismatch());
            }
            let a1 = block(rat(1, 4), rat(0, 1)); // C(x^2 + 1/4)
            let a2 = Mat2Q::new(rat(3, 4), Rat::zero(), Rat::zero(), Rat::from_integer(1.into()));
            let m = synth("x2+1.III.1", &a1, &a2);
            Ok(vec![m, Mat4::iota(), Mat4::identity().neg()])
        }
        Scenario::Sqrt1TypeIIIPair => {
            if d != -1 {
                return Err(mismatch());
            }
            let a1 = block(rat(1, 2), rat(1, 1)); // C(x^2 + x + 1/2)
            let a2 = Mat2Q::new(rat(1, 2), Rat::zero(), Rat::zero(), Rat::from_integer(1.into()));
            let m = synth("x3+x2+x+1.III", &a1, &a2);
            let n = synth("x2+x+1.III.2", &a1, &a2);
            Ok(vec![m, n, Mat4::iota(), Mat4::identity().neg()])
        }
        Scenario::Generic => {
            if [-1, -2, -3].contains(&d) {
                return Err(mismatch());
            }
            Ok(vec![
                Mat4::identity().neg(),
                Mat4::iota(),
                Mat4::anti_sum(&Mat2Q::identity(), &Mat2Q::identity()),
            ])
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PresentationKind {
    Sqrt3,
    Sqrt2,
    Sqrt1Pair,
}

impl PresentationKind {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "sqrt3" => Self::Sqrt3,
            "sqrt2" => Self::Sqrt2,
            "sqrt1_pair" => Self::Sqrt1Pair,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PresentationReport {
    pub kind: String,
    pub order: usize,
    pub identities: Vec<(String, bool)>,
    /// Whether the coset normal form sweeps out exactly the group.
    pub coverage: Option<bool>,
    /// Order and commutativity of the distinguished abelian subgroup,
    /// when the presentation has one.
    pub h_order: Option<usize>,
    pub h_abelian: Option<bool>,
    pub missing: Option<String>,
}

impl PresentationReport {
    pub fn all_pass(&self) -> bool {
        self.missing.is_none()
            && self.identities.iter().all(|(_, ok)| *ok)
            && self.coverage.unwrap_or(true)
            && self.h_abelian.unwrap_or(true)
    }
}

fn find_type_iii(g: &GroupSet, polys: &[Poly]) -> Option<Mat4> {
    g.elements
        .iter()
        .find(|m| {
            classify_type(&BlockMat::from_mat4(m)) == TypeTag::TypeIII
                && polys.contains(&m.min_poly())
        })
        .cloned()
}

fn same_set(g: &GroupSet, set: &[Mat4]) -> bool {
    let mut keys: Vec<_> = set.iter().map(lex_key).collect();
    keys.sort();
    keys.dedup();
    keys == g.elements.iter().map(lex_key).collect::<Vec<_>>()
}

/// Exact verification of the presentation identities attached to each
/// Type III scenario. Failures are reported, never thrown.
pub fn verify_presentation(g: &GroupSet, kind: PresentationKind) -> PresentationReport {
    let iota = Mat4::iota();
    let neg = |m: &Mat4| m.neg();
    let mut report = PresentationReport {
        kind: format!("{kind:?}"),
        order: g.order(),
        identities: Vec::new(),
        coverage: None,
        h_order: None,
        h_abelian: None,
        missing: None,
    };
    match kind {
        PresentationKind::Sqrt3 => {
            let m = match find_type_iii(
                g,
                &[Poly::from_i64(&[-1, 2, -2, 1]), Poly::from_i64(&[1, 2, 2, 1])],
            ) {
                Some(m) => m,
                None => {
                    report.missing = Some("M missing".into());
                    return report;
                }
            };
            let eta = iota.mul_mat(&m.pow(5)).mul_mat(&iota).mul_mat(&m.pow(2));
            report.identities.push((
                "eta*iota = -iota*eta".into(),
                eta.mul_mat(&iota) == neg(&iota.mul_mat(&eta)),
            ));
            // eta^3 = -M^3 and M^6 = I force eta^6 = I
            report
                .identities
                .push(("eta^6 = I".into(), eta.pow(6) == Mat4::identity()));
            report.identities.push((
                "M*iota*M = -iota*eta^2".into(),
                m.mul_mat(&iota).mul_mat(&m) == neg(&iota.mul_mat(&eta.pow(2))),
            ));
            report
                .identities
                .push(("eta^3 = -M^3".into(), eta.pow(3) == neg(&m.pow(3))));
            let mut set = Vec::new();
            for e1 in 0..2u32 {
                for a1 in 0..6u32 {
                    for a2 in 0..2u32 {
                        for e2 in 0..2u32 {
                            let w = iota
                                .pow(e1)
                                .mul_mat(&eta.pow(a1))
                                .mul_mat(&m.pow(a2))
                                .mul_mat(&iota.pow(e2));
                            set.push(w.clone());
                            set.push(neg(&w));
                        }
                    }
                }
            }
            report.coverage = Some(same_set(g, &set));
        }
        PresentationKind::Sqrt2 => {
            // the distinguished element of the computation: minimal
            // polynomial x^4 + 1 whose iota-partner is the order-6 form
            let m = g
                .elements
                .iter()
                .find(|m| {
                    classify_type(&BlockMat::from_mat4(m)) == TypeTag::TypeIII
                        && m.min_poly() == Poly::from_i64(&[1, 0, 0, 0, 1])
                        && iota.mul_mat(m).min_poly() == Poly::from_i64(&[1, -1, 1])
                })
                .cloned();
            let m = match m {
                Some(m) => m,
                None => {
                    report.missing = Some("M missing".into());
                    return report;
                }
            };
            let eta = iota.mul_mat(&m.pow(2)).pow(2);
            report.identities.push((
                "iota*M*iota*M = M^3*iota".into(),
                iota.mul_mat(&m).mul_mat(&iota).mul_mat(&m) == m.pow(3).mul_mat(&iota),
            ));
            report.identities.push((
                "iota*M*iota*M^2 = iota*eta*M*iota".into(),
                iota.mul_mat(&m).mul_mat(&iota).mul_mat(&m.pow(2))
                    == iota.mul_mat(&eta).mul_mat(&m).mul_mat(&iota),
            ));
            let mut set = Vec::new();
            for e1 in 0..2u32 {
                for a1 in 0..2u32 {
                    for a2 in 0..4u32 {
                        for e2 in 0..2u32 {
                            let w = iota
                                .pow(e1)
                                .mul_mat(&eta.pow(a1))
                                .mul_mat(&m.pow(a2))
                                .mul_mat(&iota.pow(e2));
                            set.push(w.clone());
                            set.push(neg(&w));
                        }
                    }
                }
            }
            report.coverage = Some(same_set(g, &set));
        }
        PresentationKind::Sqrt1Pair => {
            // designate M and N jointly: they must share parameters, which
            // shows up as N M^-1 landing in Type I
            let m_polys = [Poly::from_i64(&[1, 1, 1, 1]), Poly::from_i64(&[-1, 1, -1, 1])];
            let n_polys = [Poly::from_i64(&[1, 1, 1]), Poly::from_i64(&[1, -1, 1])];
            let mut designated = None;
            'search: for m in &g.elements {
                if classify_type(&BlockMat::from_mat4(m)) != TypeTag::TypeIII
                    || !m_polys.contains(&m.min_poly())
                {
                    continue;
                }
                let m_inv = m.inverse().expect("finite order");
                for n in &g.elements {
                    if classify_type(&BlockMat::from_mat4(n)) != TypeTag::TypeIII
                        || !n_polys.contains(&n.min_poly())
                        || iota.mul_mat(n).min_poly() != Poly::from_i64(&[1, 0, -1, 0, 1])
                    {
                        continue;
                    }
                    let h1 = n.mul_mat(&m_inv);
                    if classify_type(&BlockMat::from_mat4(&h1)) == TypeTag::TypeI {
                        designated = Some((m.clone(), n.clone(), h1));
                        break 'search;
                    }
                }
            }
            let Some((m, _n, h1)) = designated else {
                report.missing = Some("compatible (M, N) pair missing".into());
                return report;
            };
            // (iota M)^4 = -I, so the block diagonal element is (iota M)^2
            let h2 = iota.mul_mat(&m).pow(2);
            let h = match closure(&[h1, h2], 64) {
                Ok(h) => h,
                Err(_) => {
                    report.missing = Some("H did not close".into());
                    return report;
                }
            };
            let abelian = h.elements.iter().all(|a| {
                h.elements
                    .iter()
                    .all(|b| a.mul_mat(b) == b.mul_mat(a))
            });
            report.h_order = Some(h.order());
            report.h_abelian = Some(abelian);
            report
                .identities
                .push(("|H| = 16".into(), h.order() == 16));
            let mut set = Vec::new();
            for eta1 in &h.elements {
                for alpha in 0..3u32 {
                    let left = eta1.mul_mat(&m.pow(alpha));
                    for eta2 in &h.elements {
                        set.push(left.mul_mat(eta2));
                    }
                }
            }
            report.coverage = Some(same_set(g, &set));
        }
    }
    report
}
