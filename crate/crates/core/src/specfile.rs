//! On-disk substitution definition format.
//!
//! A definition is a TOML document:
//!
//! ```toml
//! dimension = 1
//! q = [2]
//! alphabet = ["0", "1"]
//! aperiodicity = "check-pansiot"   # or "asserted" | "unknown"
//!
//! [rules]                           # one entry per letter; Q cells each, in
//! "0" = ["0", "1"]                  # lexicographic cell order with the last
//! "1" = ["1", "0"]                  # coordinate varying fastest
//!
//! [analysis]                        # optional defaults
//! window = 3
//! p_max = 6
//! height_bound = 0                  # 0 = alphabet size
//! cell_budget = 67108864
//!
//! [weights]                         # optional class coefficients
//! coefficients = ["1/2", "1/2"]
//!
//! [[hull_candidates]]               # optional, for verify-candidates
//! entries = ["1", "-1", "-1", "1"]
//! ```
//!
//! For d = 2 with q = [2, 2] the four cells of a rule are listed as
//! (0,0), (0,1), (1,0), (1,1): first coordinate slow, second fast.
//! Validation reports every violation with its key context in one pass.

use crate::error::{Error, Result};
use crate::matrix::Rat;
use crate::pipeline::AnalysisOptions;
use crate::structure::ClassCoefficients;
use crate::substitution::{Alphabet, AperiodicityPolicy, Block, Substitution};
use crate::zd::Expansion;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Signed;
use std::str::FromStr;

#[derive(Clone, Debug)]
pub struct ParsedSpec {
    pub substitution: Substitution,
    pub options: AnalysisOptions,
    pub class_coefficients: ClassCoefficients,
    pub hull_candidates: Vec<Vec<Complex64>>,
}

#[derive(Clone, Debug)]
pub struct Diagnostic {
    pub key: String,
    pub message: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.key.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.key, self.message)
        }
    }
}

/// Parse and validate a definition; all violations are collected.
pub fn parse_spec(text: &str) -> std::result::Result<ParsedSpec, Vec<Diagnostic>> {
    let value: toml::Value = toml::from_str(text).map_err(|e| {
        vec![Diagnostic { key: String::new(), message: format!("TOML syntax: {e}") }]
    })?;
    let mut diags: Vec<Diagnostic> = Vec::new();
    let mut diag = |key: &str, message: String| {
        diags.push(Diagnostic { key: key.to_string(), message });
    };

    let table = match value.as_table() {
        Some(t) => t,
        None => {
            return Err(vec![Diagnostic {
                key: String::new(),
                message: "document is not a table".into(),
            }])
        }
    };

    // q
    let q_raw: Vec<i64> = match table.get("q").and_then(|v| v.as_array()) {
        Some(arr) => arr
            .iter()
            .enumerate()
            .filter_map(|(i, v)| match v.as_integer() {
                Some(x) => Some(x),
                None => {
                    diag("q", format!("entry {} is not an integer", i + 1));
                    None
                }
            })
            .collect(),
        None => {
            diag("q", "missing integer list".into());
            Vec::new()
        }
    };
    for (i, &qi) in q_raw.iter().enumerate() {
        if qi < 2 {
            diag("q", format!("entry {} is {qi}, must be >= 2", i + 1));
        }
    }
    if let Some(dim) = table.get("dimension").and_then(|v| v.as_integer()) {
        if dim as usize != q_raw.len() && !q_raw.is_empty() {
            diag("dimension", format!("dimension {dim} does not match q of length {}", q_raw.len()));
        }
    }

    // alphabet
    let alphabet_raw: Vec<String> = match table.get("alphabet").and_then(|v| v.as_array()) {
        Some(arr) => arr
            .iter()
            .enumerate()
            .filter_map(|(i, v)| match v.as_str() {
                Some(s) => Some(s.to_string()),
                None => {
                    diag("alphabet", format!("entry {} is not a string", i + 1));
                    None
                }
            })
            .collect(),
        None => {
            diag("alphabet", "missing string list".into());
            Vec::new()
        }
    };
    if alphabet_raw.len() < 2 {
        diag("alphabet", "at least 2 letters required".into());
    }
    for (i, a) in alphabet_raw.iter().enumerate() {
        if alphabet_raw[..i].contains(a) {
            diag("alphabet", format!("letter '{a}' repeated"));
        }
    }

    // aperiodicity policy
    let policy = match table.get("aperiodicity") {
        None => AperiodicityPolicy::Unknown,
        Some(v) => match v.as_str().and_then(AperiodicityPolicy::parse) {
            Some(p) => p,
            None => {
                diag(
                    "aperiodicity",
                    "expected one of \"check-pansiot\", \"asserted\", \"unknown\"".into(),
                );
                AperiodicityPolicy::Unknown
            }
        },
    };

    // rules
    let q_cells: i64 = q_raw.iter().product();
    let mut rules_ok = true;
    let mut rule_rows: Vec<Vec<usize>> = Vec::new();
    match table.get("rules").and_then(|v| v.as_table()) {
        None => {
            diag("rules", "missing rules table".into());
            rules_ok = false;
        }
        Some(rt) => {
            for letter in &alphabet_raw {
                let key = format!("rule '{letter}'");
                match rt.get(letter).and_then(|v| v.as_array()) {
                    None => {
                        diag(&key, "missing rule".into());
                        rules_ok = false;
                    }
                    Some(arr) => {
                        if q_cells > 0 && arr.len() as i64 != q_cells {
                            diag(&key, format!("expected {q_cells} cells, found {}", arr.len()));
                            rules_ok = false;
                        }
                        let mut row = Vec::with_capacity(arr.len());
                        for (i, cell) in arr.iter().enumerate() {
                            match cell.as_str() {
                                None => {
                                    diag(&key, format!("cell {} is not a string", i + 1));
                                    rules_ok = false;
                                }
                                Some(name) => {
                                    match alphabet_raw.iter().position(|l| l == name) {
                                        Some(idx) => row.push(idx),
                                        None => {
                                            diag(&key, format!("unknown letter '{name}'"));
                                            rules_ok = false;
                                        }
                                    }
                                }
                            }
                        }
                        rule_rows.push(row);
                    }
                }
            }
            for extra in rt.keys() {
                if !alphabet_raw.contains(extra) {
                    diag(&format!("rule '{extra}'"), "letter not in the alphabet".into());
                }
            }
        }
    }

    // analysis defaults
    let mut options = AnalysisOptions::default();
    if let Some(a) = table.get("analysis").and_then(|v| v.as_table()) {
        if let Some(w) = a.get("window") {
            match w.as_integer() {
                Some(x) if x >= 0 => options.window = x as u32,
                _ => diag("analysis.window", "expected a nonnegative integer".into()),
            }
        }
        if let Some(p) = a.get("p_max") {
            match p.as_integer() {
                Some(x) if x >= 1 => options.p_max = x as u32,
                _ => diag("analysis.p_max", "expected a positive integer".into()),
            }
        }
        if let Some(h) = a.get("height_bound") {
            match h.as_integer() {
                Some(x) if x >= 0 => options.height_bound = x as u64,
                _ => diag("analysis.height_bound", "expected a nonnegative integer".into()),
            }
        }
        if let Some(c) = a.get("cell_budget") {
            match c.as_integer() {
                Some(x) if x > 0 => options.cell_budget = x as u64,
                _ => diag("analysis.cell_budget", "expected a positive integer".into()),
            }
        }
    }

    // class coefficients
    let mut class_coefficients = ClassCoefficients::Uniform;
    if let Some(w) = table.get("weights").and_then(|v| v.as_table()) {
        if let Some(arr) = w.get("coefficients").and_then(|v| v.as_array()) {
            let mut coeffs = Vec::new();
            for (i, v) in arr.iter().enumerate() {
                match v.as_str().and_then(parse_rational) {
                    Some(r) => coeffs.push(r),
                    None => diag(
                        "weights.coefficients",
                        format!("entry {} is not a rational like \"1/2\"", i + 1),
                    ),
                }
            }
            class_coefficients = ClassCoefficients::Given(coeffs);
        }
    }

    // hull candidates
    let mut hull_candidates = Vec::new();
    if let Some(arr) = table.get("hull_candidates").and_then(|v| v.as_array()) {
        let s2 = alphabet_raw.len() * alphabet_raw.len();
        for (ci, cand) in arr.iter().enumerate() {
            let key = format!("hull_candidates[{ci}]");
            match cand.get("entries").and_then(|v| v.as_array()) {
                None => diag(&key, "missing entries list".into()),
                Some(entries) => {
                    if entries.len() != s2 {
                        diag(&key, format!("expected {s2} entries, found {}", entries.len()));
                        continue;
                    }
                    let mut parsed = Vec::with_capacity(s2);
                    let mut ok = true;
                    for (i, e) in entries.iter().enumerate() {
                        match e.as_str().and_then(parse_complex) {
                            Some(z) => parsed.push(z),
                            None => {
                                diag(&key, format!("entry {} is not a number", i + 1));
                                ok = false;
                            }
                        }
                    }
                    if ok {
                        hull_candidates.push(parsed);
                    }
                }
            }
        }
    }

    if !diags.is_empty() {
        return Err(diags);
    }
    let expansion = match Expansion::from_i64(&q_raw) {
        Ok(e) => e,
        Err(m) => return Err(vec![Diagnostic { key: "q".into(), message: m }]),
    };
    let alphabet = match Alphabet::new(alphabet_raw) {
        Ok(a) => a,
        Err(e) => return Err(vec![Diagnostic { key: "alphabet".into(), message: e.to_string() }]),
    };
    if !rules_ok {
        return Err(vec![Diagnostic { key: "rules".into(), message: "invalid rules".into() }]);
    }
    let shape = expansion.pow(1);
    let blocks = rule_rows
        .into_iter()
        .map(|row| Block::new(shape.clone(), row))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| vec![Diagnostic { key: "rules".into(), message: e.to_string() }])?;
    let substitution = Substitution::new(expansion, alphabet, blocks, policy)
        .map_err(|e| vec![Diagnostic { key: String::new(), message: e.to_string() }])?;
    Ok(ParsedSpec { substitution, options, class_coefficients, hull_candidates })
}

pub fn parse_spec_file(path: &std::path::Path) -> Result<ParsedSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
    parse_spec(&text).map_err(|diags| {
        let lines: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
        Error::invalid(lines.join("\n"))
    })
}

/// Canonical serialization: fixed key order, quoted letters, flat rule lists.
/// `parse(canonical(parse(x))) == parse(x)`.
pub fn canonical_string(spec: &ParsedSpec) -> String {
    let sub = &spec.substitution;
    let mut out = String::new();
    out.push_str(&format!("dimension = {}\n", sub.dim()));
    let qs: Vec<String> = sub.expansion().q().coords().iter().map(|c| c.to_string()).collect();
    out.push_str(&format!("q = [{}]\n", qs.join(", ")));
    let letters: Vec<String> =
        sub.alphabet().names().iter().map(|l| format!("\"{l}\"")).collect();
    out.push_str(&format!("alphabet = [{}]\n", letters.join(", ")));
    out.push_str(&format!(
        "aperiodicity = \"{}\"\n\n[rules]\n",
        sub.aperiodicity_policy().as_str()
    ));
    for (i, letter) in sub.alphabet().names().iter().enumerate() {
        let cells: Vec<String> = sub
            .rule(i)
            .cells()
            .iter()
            .map(|&c| format!("\"{}\"", sub.alphabet().name(c)))
            .collect();
        out.push_str(&format!("\"{letter}\" = [{}]\n", cells.join(", ")));
    }
    out.push_str(&format!(
        "\n[analysis]\nwindow = {}\np_max = {}\nheight_bound = {}\ncell_budget = {}\n",
        spec.options.window, spec.options.p_max, spec.options.height_bound, spec.options.cell_budget
    ));
    if let ClassCoefficients::Given(coeffs) = &spec.class_coefficients {
        let cs: Vec<String> = coeffs.iter().map(|c| format!("\"{c}\"")).collect();
        out.push_str(&format!("\n[weights]\ncoefficients = [{}]\n", cs.join(", ")));
    }
    for cand in &spec.hull_candidates {
        let es: Vec<String> = cand.iter().map(|z| format!("\"{}\"", render_complex(z))).collect();
        out.push_str(&format!("\n[[hull_candidates]]\nentries = [{}]\n", es.join(", ")));
    }
    out
}

fn render_complex(z: &Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

pub fn parse_rational(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).ok()?;
        let d = BigInt::from_str(den.trim()).ok()?;
        if d.is_zero_or_negative() {
            return None;
        }
        return Some(Rat::new(n, d));
    }
    if let Ok(n) = BigInt::from_str(s) {
        return Some(Rat::from_integer(n));
    }
    // decimal literal, exactly
    let (sign, rest) = match s.strip_prefix('-') {
        Some(r) => (-1, r),
        None => (1, s),
    };
    let (int_part, frac_part) = rest.split_once('.')?;
    let digits = format!("{int_part}{frac_part}");
    let n = BigInt::from_str(&digits).ok()?;
    let d = BigInt::from(10u32).pow(frac_part.len() as u32);
    Some(Rat::new(n * sign, d))
}

trait ZeroOrNegative {
    fn is_zero_or_negative(&self) -> bool;
}

impl ZeroOrNegative for BigInt {
    fn is_zero_or_negative(&self) -> bool {
        !self.is_positive()
    }
}

/// "a", "a+bi", "a-bi" with rational or decimal parts; "i" alone is allowed.
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s = s.trim();
    if let Some(re) = parse_rational(s) {
        return Some(Complex64::new(crate::matrix::rat_to_f64(&re), 0.0));
    }
    let body = s.strip_suffix('i')?;
    // split at the last +/- that is not the leading sign
    let split_at = body
        .char_indices()
        .skip(1)
        .filter(|(i, c)| (*c == '+' || *c == '-') && body.as_bytes()[i - 1] != b'/')
        .map(|(i, _)| i)
        .last();
    match split_at {
        Some(i) => {
            let re = parse_rational(&body[..i])?;
            let im_str = &body[i..];
            let im = if im_str == "+" {
                Rat::from_integer(1.into())
            } else if im_str == "-" {
                Rat::from_integer((-1).into())
            } else {
                parse_rational(im_str)?
            };
            Some(Complex64::new(
                crate::matrix::rat_to_f64(&re),
                crate::matrix::rat_to_f64(&im),
            ))
        }
        None => {
            let im = if body.is_empty() {
                Rat::from_integer(1.into())
            } else if body == "-" {
                Rat::from_integer((-1).into())
            } else {
                parse_rational(body)?
            };
            Some(Complex64::new(0.0, crate::matrix::rat_to_f64(&im)))
        }
    }
}
