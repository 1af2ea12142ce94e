//! JSON conversions for every value that crosses the command line.
//!
//! Exact values never pass through floating point: rationals are carried
//! as `"a/b"` strings in both directions, scalars that happen to be
//! irrational are shipped as their sign and exact p-th power, and radicals
//! as their canonical term lists. Parsing is strict — anything malformed
//! is a usage error, reported before any computation starts.

use num_rational::BigRational;
use serde_json::{json, Value};

use schreier_core::families::{BlockDecomposition, IndexSet, OrderIndex};
use schreier_core::lambda::{AveragedVector, DecompCert};
use schreier_core::scalar::{PScalar, Radical, Sign};
use schreier_core::vectors::{GapReport, RadicalVector, SparseVector};
use schreier_core::{DualRep, Functional, MarginReport, SignedPerm};

/// A malformed command-line value; the payload is the message shown to the
/// user. Maps to the usage exit code.
#[derive(Debug)]
pub struct UsageError(pub String);

impl core::fmt::Display for UsageError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

// ---------------------------------------------------------------------------
// Parsing

/// `"3"` or `"omega"`/`"ω"`.
pub fn parse_order(s: &str) -> Result<OrderIndex, UsageError> {
    match s {
        "omega" | "ω" => Ok(OrderIndex::Omega),
        _ => s
            .parse::<u32>()
            .map(OrderIndex::Finite)
            .map_err(|_| usage(format!("order must be a nonnegative integer or \"omega\", got {s:?}"))),
    }
}

/// `"2,3,7"`, strictly increasing positive integers; `""` is the empty set.
pub fn parse_index_set(s: &str) -> Result<IndexSet, UsageError> {
    if s.is_empty() {
        return Ok(IndexSet::empty());
    }
    let elems = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| usage(format!("set elements must be positive integers, got {t:?}")))
        })
        .collect::<Result<Vec<u32>, UsageError>>()?;
    IndexSet::new(elems).map_err(|_| usage(format!("set must be strictly increasing and positive, got {s:?}")))
}

/// `"1,1,2"`, positive integers for ladder block lengths.
pub fn parse_lengths(s: &str) -> Result<Vec<u32>, UsageError> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| usage(format!("lengths must be positive integers, got {t:?}")))
        })
        .collect()
}

/// `"a/b"` or `"a"`, exactly.
pub fn parse_rational(s: &str) -> Result<BigRational, UsageError> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|_| usage(format!("rationals are written \"a/b\" or \"a\", got {s:?}")))
}

fn as_pairs(v: &Value, what: &str) -> Result<Vec<(u32, Value)>, UsageError> {
    let arr = v
        .as_array()
        .ok_or_else(|| usage(format!("{what} must be a JSON array of [index, value] pairs")))?;
    arr.iter()
        .map(|entry| {
            let pair = entry
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| usage(format!("{what} entries must be [index, value] pairs")))?;
            let idx = pair[0]
                .as_u64()
                .and_then(|i| u32::try_from(i).ok())
                .filter(|&i| i >= 1)
                .ok_or_else(|| usage(format!("{what} indices must be positive integers")))?;
            Ok((idx, pair[1].clone()))
        })
        .collect()
}

/// `[[1,"1"],[2,"-1/2"]]`: coordinate values as exact rationals.
pub fn parse_vector(p: u32, s: &str) -> Result<SparseVector, UsageError> {
    let v: Value = serde_json::from_str(s).map_err(|e| usage(format!("vector is not valid JSON: {e}")))?;
    let values = as_pairs(&v, "vector")?
        .into_iter()
        .map(|(i, val)| {
            let rat = val
                .as_str()
                .ok_or_else(|| usage("vector values must be rational strings"))
                .and_then(parse_rational)?;
            Ok((i, rat))
        })
        .collect::<Result<Vec<_>, UsageError>>()?;
    SparseVector::from_values(p, values).map_err(|e| usage(format!("vector rejected: {e}")))
}

/// `{"coeffs": [[2,"1"],[3,"-1"]]}`.
pub fn parse_functional(s: &str) -> Result<Functional, UsageError> {
    let v: Value = serde_json::from_str(s).map_err(|e| usage(format!("functional is not valid JSON: {e}")))?;
    let coeffs = v
        .get("coeffs")
        .ok_or_else(|| usage("functional must be {\"coeffs\": [[index, \"a/b\"], …]}"))?;
    let pairs = as_pairs(coeffs, "coeffs")?
        .into_iter()
        .map(|(i, val)| {
            let rat = val
                .as_str()
                .ok_or_else(|| usage("functional coefficients must be rational strings"))
                .and_then(parse_rational)?;
            Ok((i, rat))
        })
        .collect::<Result<Vec<_>, UsageError>>()?;
    Functional::new(pairs).map_err(|e| usage(format!("functional rejected: {e}")))
}

/// `{"perm": [[1,2],[2,1]], "signs": [[1,1],[2,-1]]}`: the images of
/// `1, …, M` and their signs; omitted signs default to `+1`.
pub fn parse_signed_perm(s: &str) -> Result<SignedPerm, UsageError> {
    let v: Value = serde_json::from_str(s).map_err(|e| usage(format!("perm is not valid JSON: {e}")))?;
    let perm_pairs = as_pairs(
        v.get("perm")
            .ok_or_else(|| usage("perm must be {\"perm\": [[i, image], …], \"signs\": [[i, ±1], …]}"))?,
        "perm",
    )?;
    let m = perm_pairs.len();
    let mut images = vec![0u32; m];
    for (i, img) in perm_pairs {
        let img = img
            .as_u64()
            .and_then(|x| u32::try_from(x).ok())
            .filter(|&x| x >= 1)
            .ok_or_else(|| usage("perm images must be positive integers"))?;
        let slot = images
            .get_mut(i as usize - 1)
            .ok_or_else(|| usage("perm must list each index 1, …, M exactly once"))?;
        if *slot != 0 {
            return Err(usage("perm lists an index twice"));
        }
        *slot = img;
    }
    if images.contains(&0) {
        return Err(usage("perm must list each index 1, …, M exactly once"));
    }
    let mut signs = vec![1i8; m];
    if let Some(sign_val) = v.get("signs") {
        for (i, sv) in as_pairs(sign_val, "signs")? {
            let s = sv
                .as_i64()
                .and_then(|x| i8::try_from(x).ok())
                .filter(|&x| x == 1 || x == -1)
                .ok_or_else(|| usage("signs must be 1 or -1"))?;
            *signs
                .get_mut(i as usize - 1)
                .ok_or_else(|| usage("sign indices must lie in the perm window"))? = s;
        }
    }
    SignedPerm::new(images, signs).map_err(|e| usage(format!("perm rejected: {e}")))
}

// ---------------------------------------------------------------------------
// Serialization

pub fn rational(r: &BigRational) -> Value {
    Value::String(r.to_string())
}

pub fn order(alpha: OrderIndex) -> Value {
    match alpha {
        OrderIndex::Finite(n) => json!({ "n": n }),
        OrderIndex::Omega => json!({ "omega": true }),
    }
}

pub fn index_set(s: &IndexSet) -> Value {
    Value::Array(s.iter().map(|i| json!(i)).collect())
}

pub fn index_sets(sets: &[IndexSet]) -> Value {
    Value::Array(sets.iter().map(index_set).collect())
}

fn scalar(s: &PScalar) -> Value {
    match s.as_rational() {
        Some(r) => rational(&r),
        None => json!({
            "sign": if s.sign() == Sign::Neg { -1 } else { 1 },
            "mag_p": s.mag_p().to_string(),
        }),
    }
}

pub fn vector(x: &SparseVector) -> Value {
    Value::Array(
        x.entries()
            .map(|(i, s)| json!([i, scalar(s)]))
            .collect(),
    )
}

fn radical(r: &Radical) -> Value {
    match r.as_rational() {
        Some(q) => rational(&q),
        None => json!({
            "terms": r
                .terms()
                .iter()
                .map(|(coef, radicand)| json!([coef.to_string(), radicand.to_string()]))
                .collect::<Vec<Value>>(),
        }),
    }
}

pub fn radical_vector(x: &RadicalVector) -> Value {
    Value::Array(
        x.entries()
            .map(|(i, r)| json!([i, radical(r)]))
            .collect(),
    )
}

pub fn functional(f: &Functional) -> Value {
    json!({
        "coeffs": f
            .coeffs()
            .map(|(i, c)| json!([i, rational(c)]))
            .collect::<Vec<Value>>(),
    })
}

pub fn block_decomposition(d: &BlockDecomposition) -> Value {
    json!({
        "blocks": index_sets(&d.blocks),
        "inner_order": order(d.inner_order),
        "outer_order": order(d.outer_order),
    })
}

pub fn gap_report(r: &GapReport) -> Value {
    json!({
        "epsilon_x": rational(&r.epsilon_x),
        "a_x": index_sets(&r.a_x),
        "one_sets": index_sets(&r.one_sets),
    })
}

pub fn averaged(a: &AveragedVector) -> Value {
    json!({
        "vector": vector(&a.vector),
        "order": a.order,
        "start": a.start,
        "eta_sup": rational(&a.eta_sup),
    })
}

pub fn decomp_cert(c: &DecompCert) -> Value {
    json!({
        "pieces": c
            .pieces
            .iter()
            .map(|p| {
                json!({
                    "weight": rational(&p.weight),
                    "vector": radical_vector(&p.vector),
                    "extreme": p.extreme,
                })
            })
            .collect::<Vec<Value>>(),
        "lambda_lower": rational(&c.lambda_lower),
    })
}

pub fn dual_rep(r: &DualRep) -> Value {
    json!({
        "terms": r
            .terms
            .iter()
            .map(|(w, f)| json!([rational(w), functional(f)]))
            .collect::<Vec<Value>>(),
        "total": rational(&r.total),
    })
}

pub fn margin_report(r: &MarginReport) -> Value {
    json!({
        "margin": rational(&r.margin),
        "epsilon_x": rational(&r.epsilon_x),
        "witness": functional(&r.witness),
        "attains": r.attains.iter().map(functional).collect::<Vec<Value>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_parse_both_ways() {
        assert_eq!(parse_order("2").unwrap(), OrderIndex::Finite(2));
        assert_eq!(parse_order("omega").unwrap(), OrderIndex::Omega);
        assert_eq!(parse_order("ω").unwrap(), OrderIndex::Omega);
        assert!(parse_order("-1").is_err());
        assert!(parse_order("two").is_err());
    }

    #[test]
    fn sets_must_increase() {
        assert_eq!(parse_index_set("2,3").unwrap().elems(), &[2, 3]);
        assert!(parse_index_set("3,2").is_err());
        assert!(parse_index_set("0,1").is_err());
        assert!(parse_index_set("").unwrap().is_empty());
    }

    #[test]
    fn vectors_round_trip_rationals() {
        let x = parse_vector(1, r#"[[1,"1"],[3,"-1/2"]]"#).unwrap();
        assert_eq!(vector(&x), serde_json::json!([[1, "1"], [3, "-1/2"]]));
        assert!(parse_vector(1, r#"[[1,1]]"#).is_err());
        assert!(parse_vector(1, r#"[[0,"1"]]"#).is_err());
        assert!(parse_vector(1, "nonsense").is_err());
    }

    #[test]
    fn irrational_scalars_ship_their_power() {
        let x = parse_vector(2, r#"[[1,"1/2"]]"#).unwrap();
        // The value 1/2 at p = 2 is stored as (1/4)^(1/2) and is rational.
        assert_eq!(vector(&x), serde_json::json!([[1, "1/2"]]));
        let y = SparseVector::from_entries(
            2,
            [(1, PScalar::new(2, Sign::Pos, BigRational::new(1.into(), 2.into())).unwrap())],
        )
        .unwrap();
        assert_eq!(
            vector(&y),
            serde_json::json!([[1, {"sign": 1, "mag_p": "1/2"}]])
        );
    }

    #[test]
    fn perms_parse_and_reject() {
        let u = parse_signed_perm(r#"{"perm": [[1,2],[2,1]], "signs": [[1,1],[2,-1]]}"#).unwrap();
        assert_eq!(u.images(), &[2, 1]);
        assert_eq!(u.sign_of(2), Sign::Neg);
        let v = parse_signed_perm(r#"{"perm": [[1,1],[2,2]]}"#).unwrap();
        assert!(v.is_pure_sign_flip());
        assert!(parse_signed_perm(r#"{"perm": [[1,1],[1,2]]}"#).is_err());
        assert!(parse_signed_perm(r#"{"perm": [[1,1],[2,2]], "signs": [[1,0]]}"#).is_err());
        assert!(parse_signed_perm(r#"{"perm": [[1,3],[2,4]]}"#).is_err());
    }

    #[test]
    fn functionals_parse_strictly() {
        let f = parse_functional(r#"{"coeffs": [[2,"1"],[3,"-1"]]}"#).unwrap();
        assert_eq!(f.coeff(3), BigRational::from_integer((-1).into()));
        assert!(parse_functional(r#"{"coeffs": [[2,1]]}"#).is_err());
        assert!(parse_functional(r#"[[2,"1"]]"#).is_err());
    }
}
