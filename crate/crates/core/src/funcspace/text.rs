//! Text forms: the key-value block, the flag mini-language and `k,theta` CSV.

use super::{CosineSeries, FunctionSpec};
use crate::error::{Error, Result};

pub(super) fn to_kv(f: &FunctionSpec) -> String {
    let join = |v: &[f64]| v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(",");
    match f {
        FunctionSpec::Constant(c) => format!("kind=constant\nvalue={c:e}\n"),
        FunctionSpec::Cosine(s) => format!("kind=cosine\ntheta={}\n", join(s.theta())),
        FunctionSpec::Jump { low, high, point } => {
            format!("kind=jump\nlow={low:e}\nhigh={high:e}\npoint={point:e}\n")
        }
        FunctionSpec::Tabulated(v) => format!("kind=tabulated\nvalues={}\n", join(v)),
    }
}

fn parse_num(field: &str, raw: &str) -> Result<f64> {
    raw.trim()
        .parse::<f64>()
        .map_err(|_| Error::FunctionSpec(format!("field `{field}`: cannot parse `{}` as a number", raw.trim())))
}

fn parse_list(field: &str, raw: &str) -> Result<Vec<f64>> {
    raw.split(',').map(|x| parse_num(field, x)).collect()
}

pub(super) fn from_kv(src: &str) -> Result<FunctionSpec> {
    let mut pairs = std::collections::BTreeMap::new();
    for (lineno, line) in src.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::FunctionSpec(format!("line {}: expected key=value", lineno + 1)))?;
        pairs.insert(k.trim().to_string(), v.trim().to_string());
    }
    let get = |key: &str| {
        pairs
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| Error::FunctionSpec(format!("missing field `{key}`")))
    };
    match get("kind")? {
        "constant" => FunctionSpec::constant(parse_num("value", get("value")?)?),
        "cosine" => FunctionSpec::cosine(parse_list("theta", get("theta")?)?)
            .map_err(|e| Error::FunctionSpec(e.to_string())),
        "jump" => FunctionSpec::jump(
            parse_num("low", get("low")?)?,
            parse_num("high", get("high")?)?,
            parse_num("point", get("point")?)?,
        ),
        "tabulated" => FunctionSpec::tabulated(parse_list("values", get("values")?)?),
        other => Err(Error::FunctionSpec(format!("field `kind`: unknown kind `{other}`"))),
    }
}

pub(super) fn from_flag(src: &str) -> Result<FunctionSpec> {
    let (tag, body) = src
        .split_once(':')
        .ok_or_else(|| Error::FunctionSpec(format!("`{src}`: expected const:, cos:, jump: or file:")))?;
    match tag {
        "const" => FunctionSpec::constant(parse_num("const", body)?),
        "cos" => FunctionSpec::cosine(parse_list("cos", body)?).map_err(|e| Error::FunctionSpec(e.to_string())),
        "jump" => {
            let v = parse_list("jump", body)?;
            if v.len() != 3 {
                return Err(Error::FunctionSpec(format!("jump: expects lo,hi,point, got {} values", v.len())));
            }
            FunctionSpec::jump(v[0], v[1], v[2])
        }
        "file" => {
            let text = std::fs::read_to_string(body)
                .map_err(|e| Error::FunctionSpec(format!("file `{body}`: {e}")))?;
            from_kv(&text)
        }
        other => Err(Error::FunctionSpec(format!("unknown function kind `{other}`"))),
    }
}

pub(super) fn series_from_csv(src: &str) -> Result<CosineSeries> {
    let mut lines = src.lines().filter(|l| !l.trim().is_empty());
    match lines.next().map(str::trim) {
        Some("k,theta") => {}
        other => return Err(Error::arg("csv", format!("expected header `k,theta`, got {other:?}"))),
    }
    let mut theta = Vec::new();
    for (row, line) in lines.enumerate() {
        let (k, v) = line
            .split_once(',')
            .ok_or_else(|| Error::arg("csv", format!("row {}: expected two columns", row + 1)))?;
        let k: usize = k
            .trim()
            .parse()
            .map_err(|_| Error::arg("k", format!("row {}: `{}` is not an index", row + 1, k.trim())))?;
        if k != theta.len() {
            return Err(Error::arg("k", format!("row {}: expected index {}, got {k}", row + 1, theta.len())));
        }
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::arg("theta", format!("row {}: `{}` is not a number", row + 1, v.trim())))?;
        theta.push(v);
    }
    CosineSeries::new(theta)
}
