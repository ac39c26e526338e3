//! Text cache of coefficient tables.
//!
//! ```text
//! WPVOL-CACHE 1 convention=paper
//! 0 3 | 0 0 0 | 0:1/1
//! 0 4 | 0 0 0 0 | 1:2/1
//! #sha256 <hex digest of every preceding byte>
//! ```

use std::fs;
use std::io::Write;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use sha2::{Digest, Sha256};

use crate::qpi::{PiPoly, Rational};
use crate::recursion::{CoeffTable, Convention, Signature};
use crate::{Error, Result};

pub const FORMAT_VERSION: &str = "1";
const MAGIC: &str = "WPVOL-CACHE";
const FOOTER: &str = "#sha256 ";

/// Canonical text form of `table`.
pub fn to_text(table: &CoeffTable) -> String {
    let mut sigs: Vec<Signature> = table.signatures().collect();
    sigs.sort_by_key(|s| (s.euler_abs(), s.g(), s.n()));
    let mut body = format!(
        "{MAGIC} {FORMAT_VERSION} convention={}\n",
        table.convention()
    );
    for sig in sigs {
        for (alpha, value) in table.signature_entries(sig) {
            let a: Vec<String> = alpha.iter().map(|v| v.to_string()).collect();
            body.push_str(&format!(
                "{} {} | {} | {}\n",
                sig.g(),
                sig.n(),
                a.join(" "),
                value.to_cache_string()
            ));
        }
    }
    let digest = hex::encode(Sha256::digest(body.as_bytes()));
    body.push_str(FOOTER);
    body.push_str(&digest);
    body.push('\n');
    body
}

/// Writes `table` to `path` atomically (temporary file in the same
/// directory, then rename).
pub fn save(table: &CoeffTable, path: &Path) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(to_text(table).as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Reads a cache file written under `expected` convention.
pub fn load(path: &Path, expected: Convention) -> Result<CoeffTable> {
    let text = fs::read(path)?;
    let text = String::from_utf8(text).map_err(|_| Error::Parse {
        line: 0,
        msg: "file is not UTF-8".into(),
    })?;
    from_text(&text, expected)
}

pub fn from_text(text: &str, expected: Convention) -> Result<CoeffTable> {
    let body_end = text
        .rfind(FOOTER)
        .filter(|&i| i == 0 || text.as_bytes()[i - 1] == b'\n')
        .ok_or(Error::ChecksumMismatch)?;
    let (body, footer) = text.split_at(body_end);
    let digest = footer
        .strip_prefix(FOOTER)
        .and_then(|d| d.strip_suffix('\n'))
        .ok_or(Error::ChecksumMismatch)?;
    if hex::encode(Sha256::digest(body.as_bytes())) != digest {
        return Err(Error::ChecksumMismatch);
    }

    let mut lines = body.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let convention = parse_header(header)?;
    if convention != expected {
        return Err(Error::ConventionMismatch {
            expected: expected.to_string(),
            found: convention.to_string(),
        });
    }
    let mut table = CoeffTable::new(convention);
    for (line, l) in lines {
        let (sig, alpha, value) = parse_line(l, line)?;
        check_entry(sig, &alpha, &value, line)?;
        if table.get_sorted(sig, &alpha).is_some() {
            return Err(Error::Integrity {
                line,
                msg: "duplicate key".into(),
            });
        }
        table.insert(sig, &alpha, value);
    }
    table.refresh_complete();
    Ok(table)
}

fn parse_header(header: &str) -> Result<Convention> {
    let parts: Vec<&str> = header.split(' ').collect();
    let bad = || Error::Parse {
        line: 1,
        msg: format!("bad header `{header}`"),
    };
    if parts.len() != 3 || parts[0] != MAGIC {
        return Err(bad());
    }
    if parts[1] != FORMAT_VERSION {
        return Err(Error::VersionMismatch(parts[1].to_string()));
    }
    parts[2]
        .strip_prefix("convention=")
        .ok_or_else(bad)?
        .parse()
        .map_err(|_| bad())
}

fn parse_line(l: &str, line: usize) -> Result<(Signature, Vec<u32>, PiPoly)> {
    let err = |msg: &str| Error::Parse {
        line,
        msg: msg.to_string(),
    };
    let fields: Vec<&str> = l.split(" | ").collect();
    if fields.len() != 3 {
        return Err(err("expected `g n | alpha | value`"));
    }
    let gn: Vec<u32> = parse_ints(fields[0]).ok_or_else(|| err("bad signature"))?;
    if gn.len() != 2 {
        return Err(err("bad signature"));
    }
    let sig = Signature::new(gn[0], gn[1]).map_err(|e| Error::Integrity {
        line,
        msg: e.to_string(),
    })?;
    let alpha = parse_ints(fields[1]).ok_or_else(|| err("bad multi-index"))?;
    let mut terms = Vec::new();
    for t in fields[2].split(',') {
        let (d, r) = t.split_once(':').ok_or_else(|| err("bad term"))?;
        let d: u32 = parse_canonical_uint(d).ok_or_else(|| err("bad exponent"))?;
        terms.push((d, parse_rational(r).ok_or_else(|| err("bad rational"))?));
    }
    let value = PiPoly::from_terms(terms.iter().cloned());
    // reject anything that would not be reproduced byte for byte
    if value.to_cache_string() != fields[2] {
        return Err(err("value not in canonical form"));
    }
    Ok((sig, alpha, value))
}

fn parse_canonical_uint(s: &str) -> Option<u32> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) || (s.len() > 1 && s.starts_with('0'))
    {
        return None;
    }
    s.parse().ok()
}

fn parse_ints(s: &str) -> Option<Vec<u32>> {
    s.split(' ').map(parse_canonical_uint).collect()
}

fn parse_rational(s: &str) -> Option<Rational> {
    let (p, q) = s.split_once('/')?;
    let p: BigInt = p.parse().ok()?;
    let q: BigInt = q.parse().ok()?;
    if !q.is_positive() {
        return None;
    }
    Some(Rational::new(p, q))
}

fn check_entry(sig: Signature, alpha: &[u32], value: &PiPoly, line: usize) -> Result<()> {
    let fail = |msg: String| Err(Error::Integrity { line, msg });
    if alpha.len() != sig.n() as usize {
        return fail(format!("multi-index length {} for {sig}", alpha.len()));
    }
    if alpha.windows(2).any(|w| w[0] < w[1]) {
        return fail("multi-index not sorted descending".into());
    }
    let total: u32 = alpha.iter().sum();
    if total > sig.degree_bound() {
        return fail(format!("|alpha| = {total} exceeds {}", sig.degree_bound()));
    }
    if value.is_zero() {
        if (sig.g(), sig.n()) == (0, 3) && total == 0 {
            return fail("zero value".into());
        }
        return Ok(());
    }
    match value.as_monomial() {
        Some((r, d)) if d == sig.degree_bound() - total && !r.is_zero() => Ok(()),
        _ => fail(format!(
            "value {value} is not a monomial of pi-degree {}",
            sig.degree_bound() - total
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpi::rational;
    use crate::recursion::fill;

    #[test]
    fn empty_table() {
        let t = CoeffTable::new(Convention::Paper);
        let text = to_text(&t);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("WPVOL-CACHE 1 convention=paper"));
        assert!(lines.next().unwrap().starts_with("#sha256 "));
        assert!(lines.next().is_none());
        assert!(from_text(&text, Convention::Paper).unwrap().is_empty());
    }

    #[test]
    fn data_lines() {
        let mut t = CoeffTable::new(Convention::Paper);
        fill(&mut t, 2, 4);
        let text = to_text(&t);
        assert!(text.contains("\n0 3 | 0 0 0 | 0:1/1\n"));
        assert!(text.contains("\n0 4 | 0 0 0 0 | 1:2/1\n"));
        assert!(text.contains("\n1 1 | 0 | 1:1/6\n"));
    }

    #[test]
    fn round_trip() {
        let mut t = CoeffTable::new(Convention::Paper);
        fill(&mut t, 5, 4);
        let text = to_text(&t);
        let back = from_text(&text, Convention::Paper).unwrap();
        assert_eq!(to_text(&back), text);
        for s in t.complete_signatures() {
            assert!(back.is_complete(s));
        }
    }

    fn resign(body: &str) -> String {
        format!(
            "{body}#sha256 {}\n",
            hex::encode(Sha256::digest(body.as_bytes()))
        )
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = resign("WPVOL-CACHE 1 convention=paper\n0 3 | 0 0 0 | 0:1/0\n");
        match from_text(&text, Convention::Paper) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn integrity_errors() {
        let text = resign("WPVOL-CACHE 1 convention=paper\n0 3 | 1 0 0 | 0:1/1\n");
        assert!(matches!(
            from_text(&text, Convention::Paper),
            Err(Error::Integrity { line: 2, .. })
        ));
        let text = resign("WPVOL-CACHE 1 convention=paper\n0 4 | 0 0 0 0 | 2:2/1\n");
        assert!(matches!(
            from_text(&text, Convention::Paper),
            Err(Error::Integrity { line: 2, .. })
        ));
    }

    #[test]
    fn header_errors() {
        let text = resign("WPVOL-CACHE 2 convention=paper\n");
        assert!(matches!(
            from_text(&text, Convention::Paper),
            Err(Error::VersionMismatch(_))
        ));
        let text = resign("WPVOL-CACHE 1 convention=half\n");
        assert!(matches!(
            from_text(&text, Convention::Paper),
            Err(Error::ConventionMismatch { .. })
        ));
    }

    #[test]
    fn every_single_byte_corruption_is_rejected() {
        let mut t = CoeffTable::new(Convention::Paper);
        fill(&mut t, 3, 3);
        let text = to_text(&t);
        let bytes = text.as_bytes();
        for i in 0..bytes.len() {
            let mut b = bytes.to_vec();
            b[i] ^= 0x01;
            if let Ok(s) = String::from_utf8(b) {
                assert!(
                    from_text(&s, Convention::Paper).is_err(),
                    "byte {i} accepted"
                );
            }
        }
    }

    #[test]
    fn atomic_save_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        let mut t = CoeffTable::new(Convention::Paper);
        t.insert(Signature::new(0, 3).unwrap(), &[0, 0, 0], PiPoly::one());
        t.insert(
            Signature::new(1, 1).unwrap(),
            &[0],
            PiPoly::monomial(rational(1, 6), 1),
        );
        save(&t, &path).unwrap();
        let back = load(&path, Convention::Paper).unwrap();
        assert_eq!(back.len(), 2);
        assert!(back.is_complete(Signature::new(0, 3).unwrap()));
        assert!(!back.is_complete(Signature::new(1, 1).unwrap()));
    }
}
