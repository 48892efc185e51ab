//! Census, centralizer-dimension, moduli-dimension and degree-inequality checks.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use crate::char_table::{centralizer_dim, eigenvalue_multiplicities, eta1, support, ClassFunction};
use crate::error::Result;
use crate::group::{edge_generators, standard_subgroup, ClassLabel, Sl2, SubgroupHandle, SubgroupName};
use crate::report::CheckResult;

/// Per-label element counts of a subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassCensus {
    pub subgroup: SubgroupName,
    pub counts: BTreeMap<ClassLabel, u64>,
}

impl ClassCensus {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Counts keyed by label text, for reports.
    pub fn as_text_map(&self) -> BTreeMap<String, u64> {
        text_map(&self.counts)
    }
}

fn text_map(m: &BTreeMap<ClassLabel, u64>) -> BTreeMap<String, u64> {
    m.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

pub fn census(h: &SubgroupHandle, sl: &Sl2) -> ClassCensus {
    let mut counts = BTreeMap::new();
    for x in h.elements() {
        *counts.entry(sl.classify(x)).or_insert(0) += 1;
    }
    ClassCensus { subgroup: h.name, counts }
}

/// Shared per-q state: the SL₂(q) context, η₁ and lazily built subgroups.
pub struct Context {
    pub sl: Arc<Sl2>,
    pub eta1: ClassFunction,
    subgroups: Mutex<BTreeMap<SubgroupName, Arc<SubgroupHandle>>>,
}

impl Context {
    pub fn new(q: u32) -> Result<Self> {
        let sl = Arc::new(Sl2::new(q)?);
        let eta1 = eta1(&sl)?;
        Ok(Context { sl, eta1, subgroups: Mutex::new(BTreeMap::new()) })
    }

    pub fn q(&self) -> u32 {
        self.sl.q()
    }

    pub fn subgroup(&self, name: SubgroupName) -> Result<Arc<SubgroupHandle>> {
        if let Some(h) = self.subgroups.lock().unwrap().get(&name) {
            return Ok(h.clone());
        }
        let h = Arc::new(standard_subgroup(name, &self.sl)?);
        self.subgroups.lock().unwrap().insert(name, h.clone());
        Ok(h)
    }

    pub fn cdim(&self, name: SubgroupName) -> Result<u64> {
        centralizer_dim(&self.eta1, &*self.subgroup(name)?, &self.sl)
    }

    /// k₁, k₂: number of distinct eigenvalues of ρ₀(ĝ₁), ρ₀(ĝ₃).
    pub fn eigen_counts(&self) -> Result<(usize, usize)> {
        let (g1, g3) = edge_generators(&self.sl);
        let m1 = eigenvalue_multiplicities(&self.eta1, &g1, 4, &self.sl)?;
        let m3 = eigenvalue_multiplicities(&self.eta1, &g3, 6, &self.sl)?;
        Ok((support(&m1).len(), support(&m3).len()))
    }
}

/// Which residue branch: true for q ≡ 1 (mod 3).
fn one_mod_three(q: u32) -> bool {
    q % 3 == 1
}

/// Expected Prop. 3.1 counts for each named subgroup.
pub fn expected_census(name: SubgroupName, q: u32) -> BTreeMap<ClassLabel, u64> {
    use ClassLabel::*;
    let mut m = BTreeMap::new();
    m.insert(One, 1);
    m.insert(Z, 1);
    let quarter = A((q - 1) / 4);
    let torus_pair = |m: &mut BTreeMap<ClassLabel, u64>, n: u64| {
        if one_mod_three(q) {
            m.insert(A((q - 1) / 3), n);
            m.insert(A((q - 1) / 6), n);
        } else {
            m.insert(B((q + 1) / 3), n);
            m.insert(B((q + 1) / 6), n);
        }
    };
    match name {
        SubgroupName::CqMinus1 => {
            for l in 1..=(q - 3) / 2 {
                m.insert(A(l), 2);
            }
        }
        SubgroupName::C4 => {
            m.insert(quarter, 2);
        }
        SubgroupName::Q8 => {
            m.insert(quarter, 6);
        }
        SubgroupName::C6 => torus_pair(&mut m, 2),
        SubgroupName::B => {
            for l in [C, D, ZC, ZD] {
                m.insert(l, (q as u64 - 1) / 2);
            }
            for l in 1..=(q - 3) / 2 {
                m.insert(A(l), 2 * q as u64);
            }
        }
        SubgroupName::TwoDqMinus1 => {
            for l in 1..=(q - 3) / 2 {
                m.insert(A(l), 2);
            }
            *m.get_mut(&quarter).expect("quarter class present") += q as u64 - 1;
        }
        SubgroupName::TwoDqPlus1 => {
            for k in 1..=(q - 1) / 2 {
                m.insert(B(k), 2);
            }
            m.insert(quarter, q as u64 + 1);
        }
        SubgroupName::Sl23 => {
            m.insert(quarter, 6);
            torus_pair(&mut m, 8);
        }
        SubgroupName::Z => {}
    }
    m
}

/// Item numbering (i)–(viii) of the census list.
pub const CENSUS_ITEMS: [(&str, SubgroupName); 8] = [
    ("i", SubgroupName::CqMinus1),
    ("ii", SubgroupName::C4),
    ("iii", SubgroupName::Q8),
    ("iv", SubgroupName::C6),
    ("v", SubgroupName::B),
    ("vi", SubgroupName::TwoDqMinus1),
    ("vii", SubgroupName::TwoDqPlus1),
    ("viii", SubgroupName::Sl23),
];

fn residue_implication(q: u32) -> CheckResult {
    let branch = if q % 24 == 13 { "13mod24" } else { "5mod24" };
    let ok = (q % 24 == 13) == one_mod_three(q) && q % 4 == 1;
    CheckResult::predicate(
        "census.residue",
        ok,
        json!({ "branch": branch, "q_mod_3": if q % 24 == 13 { 1 } else { 2 }, "q_mod_4": 1 }),
        json!({ "q_mod_24": q % 24, "q_mod_3": q % 3, "q_mod_4": q % 4 }),
    )
}

pub fn verify_prop31(ctx: &Context) -> Vec<CheckResult> {
    let q = ctx.q();
    let mut out = vec![residue_implication(q)];
    for (item, name) in CENSUS_ITEMS {
        let check = format!("census.{item}.{name}");
        let expected = expected_census(name, q);
        match ctx.subgroup(name) {
            Ok(h) => {
                let c = census(&h, &ctx.sl);
                let mut r = CheckResult::compare(check, text_map(&expected), c.as_text_map());
                if c.total() != h.order() as u64 || expected.values().sum::<u64>() != h.order() as u64 {
                    r.status = crate::report::Status::Fail;
                    r.detail = Some(format!("totals: census {} expected {} order {}", c.total(), expected.values().sum::<u64>(), h.order()));
                }
                out.push(r);
            }
            Err(e) => out.push(CheckResult::failure(check, text_map(&expected), e)),
        }
    }
    out
}

/// Closed-form centralizer dimensions (i)–(viii).
pub fn expected_dims(q: u32) -> [u64; 8] {
    let q = q as u64;
    let s = (q - 1) * (q - 1);
    let c6 = if q % 3 == 1 { s / 12 } else { (q * q - 2 * q + 9) / 12 };
    let sl23 = if q % 3 == 1 { s / 48 } else { (s + 32) / 48 };
    [(q - 1) / 2, s / 8, s / 16, c6, 1, (q - 1) / 4, (q - 1) / 4, sl23]
}

pub const DIM_ITEMS: [(&str, SubgroupName); 8] = [
    ("i", SubgroupName::CqMinus1),
    ("ii", SubgroupName::C4),
    ("iii", SubgroupName::Q8),
    ("iv", SubgroupName::C6),
    ("v", SubgroupName::B),
    ("vi", SubgroupName::TwoDqMinus1),
    ("vii", SubgroupName::TwoDqPlus1),
    ("viii", SubgroupName::Sl23),
];

/// Root-of-unity names for eigenvalue reports.
fn root_name(n: u32, j: u32) -> String {
    match (n, j) {
        (_, 0) => "1".into(),
        (4, 1) => "i".into(),
        (4, 2) | (6, 3) => "-1".into(),
        (4, 3) => "-i".into(),
        (6, 1) => "w".into(),
        (6, k) => format!("w^{k}"),
        (n, j) => format!("zeta_{n}^{j}"),
    }
}

fn multiplicity_map(n: u32, mults: &[u64]) -> BTreeMap<String, u64> {
    mults.iter().enumerate().map(|(j, m)| (root_name(n, j as u32), *m)).collect()
}

pub fn verify_prop42_dims(ctx: &Context) -> Vec<CheckResult> {
    let expected = expected_dims(ctx.q());
    DIM_ITEMS
        .iter()
        .zip(expected)
        .map(|((item, name), e)| {
            let check = format!("centralizer.{item}.{name}");
            match ctx.cdim(*name) {
                Ok(d) => CheckResult::compare(check, e, d),
                Err(err) => CheckResult::failure(check, e, err),
            }
        })
        .collect()
}

pub fn verify_prop42_eigenvalues(ctx: &Context) -> Vec<CheckResult> {
    let (g1, g3) = edge_generators(&ctx.sl);
    let half = (ctx.q() as u64 - 1) / 2;
    let mut out = Vec::new();
    for (check, g, n, want) in [("eigenvalues.ii.g1", g1, 4u32, vec![1u32, 3]), ("eigenvalues.iv.g3", g3, 6, vec![1, 3, 5])] {
        let expect_names: Vec<String> = want.iter().map(|&j| root_name(n, j)).collect();
        match eigenvalue_multiplicities(&ctx.eta1, &g, n as u64, &ctx.sl) {
            Ok(m) => {
                let sup = support(&m);
                let names: Vec<String> = sup.iter().map(|&j| root_name(n, j)).collect();
                let ok = sup == want && m.iter().sum::<u64>() == half;
                out.push(
                    CheckResult::predicate(check, ok, json!({ "support": expect_names, "total": half }), json!({ "support": names, "total": m.iter().sum::<u64>() }))
                        .with_detail(serde_json::to_string(&multiplicity_map(n, &m)).expect("json")),
                );
            }
            Err(e) => out.push(CheckResult::failure(check, json!({ "support": expect_names }), e)),
        }
    }
    out
}

pub fn verify_prop42(ctx: &Context) -> Vec<CheckResult> {
    let mut v = verify_prop42_dims(ctx);
    v.extend(verify_prop42_eigenvalues(ctx));
    v
}

/// dim 𝔾 = ((q−1)/2)².
pub fn dim_g(q: u32) -> u64 {
    let m = (q as u64 - 1) / 2;
    m * m
}

const EDGE_GROUPS: [SubgroupName; 4] = [SubgroupName::CqMinus1, SubgroupName::C4, SubgroupName::Q8, SubgroupName::C6];
const VERTEX_GROUPS: [SubgroupName; 3] = [SubgroupName::TwoDqMinus1, SubgroupName::TwoDqPlus1, SubgroupName::Sl23];

pub fn moduli_dimension_identity(ctx: &Context, k: u64) -> CheckResult {
    let check = format!("moduli-dim.k{k}");
    let dg = dim_g(ctx.q());
    let sums = || -> Result<(u64, u64)> {
        let e = EDGE_GROUPS.iter().map(|n| ctx.cdim(*n)).sum::<Result<u64>>()?;
        let v = VERTEX_GROUPS.iter().map(|n| ctx.cdim(*n)).sum::<Result<u64>>()?;
        Ok((e, v))
    };
    match sums() {
        Ok((e, v)) => {
            let lhs = (e + k * dg) as i64 - v as i64;
            CheckResult::compare(check, (k + 1) * dg, lhs).with_detail(format!("edge sum {e}, vertex sum {v}, dim G {dg}"))
        }
        Err(err) => CheckResult::failure(check, (k + 1) * dg, err),
    }
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// Both degree-count inequalities and the AM-QM instantiation.
pub fn degree_inequalities(ctx: &Context) -> Vec<CheckResult> {
    let q = ctx.q();
    let dg = dim_g(q);
    let mut out = Vec::new();
    let values = || -> Result<(u64, u64, usize, usize)> {
        let (k1, k2) = ctx.eigen_counts()?;
        Ok((ctx.cdim(SubgroupName::C4)?, ctx.cdim(SubgroupName::TwoDqPlus1)?, k1, k2))
    };
    let (c4, d_plus, k1, k2) = match values() {
        Ok(v) => v,
        Err(e) => return vec![CheckResult::failure("degree", dg, e)],
    };
    let s = (q as u64 - 1).pow(2);
    let branch = if q % 24 == 13 { "13mod24" } else { "5mod24" };

    let v72 = dg as i64 - c4 as i64 + d_plus as i64;
    out.push(
        CheckResult::predicate(
            "degree.surjectivity",
            v72 < dg as i64 && c4 == s / 8 && d_plus == (q as u64 - 1) / 4,
            json!({ "bound": format!("< {dg}"), "c4": s / 8, "d_plus": (q - 1) / 4 }),
            json!({ "value": v72, "c4": c4, "d_plus": d_plus }),
        )
        .with_detail(format!("branch {branch}")),
    );

    let ceil24 = ceil_div(s, 24);
    let v73 = dg as i64 + d_plus as i64 - ceil24 as i64;
    let raw = BigRational::from_integer(BigInt::from(dg + d_plus)) - BigRational::new(BigInt::from(s), BigInt::from(24));
    let raw_ok = raw < BigRational::from_integer(BigInt::from(dg));
    out.push(CheckResult::predicate(
        "degree.kernel",
        v73 < dg as i64 && raw_ok,
        json!({ "bound": format!("< {dg}") }),
        json!({ "value": v73, "ceil": ceil24, "real_form": raw.to_string() }),
    ));

    let m = (q as u64 - 1) / 2;
    let floor = BigRational::new(BigInt::from(m * m), BigInt::from((k1 * k2) as u64));
    let target = BigRational::new(BigInt::from(s), BigInt::from(24));
    out.push(CheckResult::predicate(
        "degree.amqm",
        k1 == 2 && k2 == 3 && floor == target,
        json!({ "k1": 2, "k2": 3, "value": target.to_string() }),
        json!({ "k1": k1, "k2": k2, "value": floor.to_string() }),
    ));
    out
}

pub fn verify_prop31_q(q: u32) -> Result<Vec<CheckResult>> {
    Ok(verify_prop31(&Context::new(q)?))
}

pub fn verify_prop42_q(q: u32) -> Result<Vec<CheckResult>> {
    Ok(verify_prop42(&Context::new(q)?))
}

pub fn degree_inequalities_q(q: u32) -> Result<Vec<CheckResult>> {
    Ok(degree_inequalities(&Context::new(q)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn census_examples_q13() {
        let ctx = Context::new(13).unwrap();
        let c4 = census(&ctx.subgroup(SubgroupName::C4).unwrap(), &ctx.sl);
        let want: BTreeMap<_, _> = [(ClassLabel::One, 1), (ClassLabel::Z, 1), (ClassLabel::A(3), 2)].into_iter().collect();
        assert_eq!(c4.counts, want);
        let b = census(&ctx.subgroup(SubgroupName::B).unwrap(), &ctx.sl);
        assert_eq!(b.total(), 156);
        assert_eq!(b.counts[&ClassLabel::C], 6);
        assert_eq!(b.counts[&ClassLabel::A(5)], 26);
    }

    #[test]
    fn expected_dims_examples() {
        assert_eq!(expected_dims(13), [6, 18, 9, 12, 1, 3, 3, 3]);
        assert_eq!(expected_dims(29), [14, 98, 49, 66, 1, 7, 7, 17]);
        assert_eq!(expected_dims(37), [18, 162, 81, 108, 1, 9, 9, 27]);
    }
}
