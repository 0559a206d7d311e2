//! Text formats.
//!
//! * Masks are bitstrings of length `n`, most significant character first:
//!   the first character is element `n`, the last is element `1`.
//! * Families start with `n=<n>` and then list one bitstring per line, or a
//!   single `hex=<digits>` line holding the characteristic vector.
//! * Matchings start with `n=<n> k=<k>` and list one `lower upper` edge per
//!   line; a file may hold several matchings, each opened by its header.
//! * Certificates are described on [`write_certificate`].
//!
//! Blank lines and lines starting with `#` are ignored everywhere.

use std::fmt::Write as _;

use hcube_core::integrity::{IntegrityCertificate, PeelStep, RadiusParams};
use hcube_core::matching::InducedMatching;
use hcube_core::{Family, SubsetMask};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    /// 1-based; the line after the last one for truncated input.
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        msg: msg.into(),
    }
}

pub fn mask_to_string(m: SubsetMask) -> String {
    format!("{:0width$b}", m.bits(), width = m.n() as usize)
}

pub fn parse_mask(n: u32, s: &str) -> Result<SubsetMask, String> {
    if s.len() != n as usize || !s.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(format!("expected a bitstring of length {n}, got {s:?}"));
    }
    let bits = u32::from_str_radix(s, 2).map_err(|e| e.to_string())?;
    SubsetMask::new(n, bits).map_err(|e| e.to_string())
}

/// Characteristic vector as hex, byte `j` covering masks `8j..8j+8`
/// (bit `b` of the byte is mask `8j + b`).
pub fn family_to_hex(f: &Family) -> String {
    let bytes: Vec<u8> = f.words().iter().flat_map(|w| w.to_le_bytes()).collect();
    let len = ((1usize << f.n()) / 8).max(1);
    hex::encode(&bytes[..len])
}

pub fn family_from_hex(n: u32, s: &str) -> Result<Family, String> {
    let mut bytes = hex::decode(s).map_err(|e| format!("bad hex: {e}"))?;
    let want = ((1usize << n) / 8).max(1);
    if bytes.len() != want {
        return Err(format!(
            "expected {want} hex bytes for n={n}, got {}",
            bytes.len()
        ));
    }
    bytes.resize(bytes.len().div_ceil(8) * 8, 0);
    let words = bytes
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    Family::from_words(n, words).map_err(|e| e.to_string())
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Parses space-separated `key=value` pairs, requiring exactly `keys` in order.
fn parse_header<'a>(line: usize, text: &'a str, keys: &[&str]) -> Result<Vec<&'a str>, ParseError> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != keys.len() {
        return Err(err(line, format!("expected header with keys {keys:?}")));
    }
    fields
        .iter()
        .zip(keys)
        .map(|(f, k)| {
            f.strip_prefix(k)
                .and_then(|r| r.strip_prefix('='))
                .ok_or_else(|| err(line, format!("expected `{k}=...`, got {f:?}")))
        })
        .collect()
}

fn parse_num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T, ParseError> {
    v.parse()
        .map_err(|_| err(line, format!("bad value for {key}: {v:?}")))
}

pub fn parse_family(text: &str) -> Result<Family, ParseError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines
        .next()
        .ok_or_else(|| err(1, "missing `n=<n>` header"))?;
    let n: u32 = parse_num(hl, "n", parse_header(hl, header, &["n"])?[0])?;
    let mut f = Family::empty(n).map_err(|e| err(hl, e.to_string()))?;
    let mut saw_hex = false;
    for (ln, l) in lines {
        if saw_hex {
            return Err(err(ln, "nothing may follow a hex line"));
        }
        if let Some(h) = l.strip_prefix("hex=") {
            if !f.is_empty() {
                return Err(err(ln, "cannot mix bitstrings and hex"));
            }
            f = family_from_hex(n, h).map_err(|m| err(ln, m))?;
            saw_hex = true;
        } else {
            let m = parse_mask(n, l).map_err(|m| err(ln, m))?;
            f.insert(m.bits());
        }
    }
    Ok(f)
}

pub fn write_family(f: &Family) -> String {
    let mut out = format!("n={}\n", f.n());
    for m in f.masks() {
        out.push_str(&mask_to_string(m));
        out.push('\n');
    }
    out
}

pub fn write_family_hex(f: &Family) -> String {
    format!("n={}\nhex={}\n", f.n(), family_to_hex(f))
}

pub fn write_matching(m: &InducedMatching) -> String {
    let mut out = format!("n={} k={}\n", m.n(), m.k());
    for &(l, u) in m.edges() {
        let _ = writeln!(out, "{} {}", mask_to_string(l), mask_to_string(u));
    }
    out
}

type PendingMatching = (usize, u32, u32, Vec<(SubsetMask, SubsetMask)>);

/// One or more matchings, each opened by an `n=<n> k=<k>` header.
pub fn parse_matchings(text: &str) -> Result<Vec<InducedMatching>, ParseError> {
    let mut out = Vec::new();
    let mut current: Option<PendingMatching> = None;
    let finish = |c: PendingMatching| {
        InducedMatching::new(c.1, c.2, c.3).map_err(|e| err(c.0, e.to_string()))
    };
    for (ln, l) in content_lines(text) {
        if l.starts_with("n=") {
            if let Some(c) = current.take() {
                out.push(finish(c)?);
            }
            let v = parse_header(ln, l, &["n", "k"])?;
            current = Some((
                ln,
                parse_num(ln, "n", v[0])?,
                parse_num(ln, "k", v[1])?,
                Vec::new(),
            ));
            continue;
        }
        let Some((_, n, _, edges)) = current.as_mut() else {
            return Err(err(ln, "edge before any `n=<n> k=<k>` header"));
        };
        let parts: Vec<&str> = l.split_whitespace().collect();
        let [lo, up] = parts[..] else {
            return Err(err(ln, "expected `lower upper`"));
        };
        let lo = parse_mask(*n, lo).map_err(|m| err(ln, m))?;
        let up = parse_mask(*n, up).map_err(|m| err(ln, m))?;
        edges.push((lo, up));
    }
    match current {
        Some(c) => out.push(finish(c)?),
        None => return Err(err(1, "missing `n=<n> k=<k>` header")),
    }
    Ok(out)
}

/// ```text
/// n=<n> alpha=<alpha> r0=<r0> seed=<seed> samples=<T>
/// <i> <center bitstring> <ball_hits> <sphere_hits>     (one line per step)
/// separator=<hex characteristic vector>
/// value=<claimed value>
/// ```
///
/// `alpha` is written in shortest round-trip form, so the file parses back
/// to the identical certificate.
pub fn write_certificate(c: &IntegrityCertificate) -> String {
    let mut out = format!(
        "n={} alpha={:?} r0={} seed={} samples={}\n",
        c.params.n, c.params.alpha, c.params.r0, c.seed, c.samples
    );
    for s in &c.steps {
        let _ = writeln!(
            out,
            "{} {} {} {}",
            s.index,
            mask_to_string(s.center),
            s.ball_hits,
            s.sphere_hits
        );
    }
    let _ = writeln!(out, "separator={}", family_to_hex(&c.separator));
    let _ = writeln!(out, "value={}", c.value);
    out
}

pub fn parse_certificate(text: &str) -> Result<IntegrityCertificate, ParseError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| err(1, "empty certificate"))?;
    let v = parse_header(hl, header, &["n", "alpha", "r0", "seed", "samples"])?;
    let n: u32 = parse_num(hl, "n", v[0])?;
    let alpha: f64 = parse_num(hl, "alpha", v[1])?;
    let r0: u64 = parse_num(hl, "r0", v[2])?;
    let seed: u64 = parse_num(hl, "seed", v[3])?;
    let samples: u32 = parse_num(hl, "samples", v[4])?;
    let mut last_line = hl;

    let mut steps = Vec::new();
    let mut separator = None;
    for (ln, l) in lines.by_ref() {
        last_line = ln;
        if let Some(h) = l.strip_prefix("separator=") {
            separator = Some(family_from_hex(n, h).map_err(|m| err(ln, m))?);
            break;
        }
        let parts: Vec<&str> = l.split_whitespace().collect();
        let [i, x, b, s] = parts[..] else {
            return Err(err(ln, "expected `i center ball_hits sphere_hits`"));
        };
        steps.push(PeelStep {
            index: parse_num(ln, "step index", i)?,
            center: parse_mask(n, x).map_err(|m| err(ln, m))?,
            ball_hits: parse_num(ln, "ball_hits", b)?,
            sphere_hits: parse_num(ln, "sphere_hits", s)?,
            candidates_sampled: samples + 1,
        });
    }
    let separator =
        separator.ok_or_else(|| err(last_line + 1, "truncated: missing separator line"))?;
    let (vl, vline) = lines
        .next()
        .ok_or_else(|| err(last_line + 1, "truncated: missing value line"))?;
    let value: u64 = match vline.strip_prefix("value=") {
        Some(v) => parse_num(vl, "value", v)?,
        None => return Err(err(vl, "expected `value=<v>`")),
    };
    if let Some((ln, _)) = lines.next() {
        return Err(err(ln, "unexpected content after value line"));
    }
    let separator_size = separator.len();
    Ok(IntegrityCertificate {
        params: RadiusParams {
            n: n.into(),
            alpha,
            r0,
            residual: 0.0,
        },
        samples,
        seed,
        steps,
        separator,
        separator_size,
        max_component: (value as usize).saturating_sub(separator_size),
        value,
    })
}
