//! Text formats: MOLR record files and incidence listings.
//!
//! A record is a header line
//! `MOLR n=<n> k=<k> t=<t> [aut=<order>] [flags=<code>]`
//! followed by `t * k` lines of `n` space-separated symbols, rectangle by
//! rectangle. Records are separated by blank lines and `#` starts a comment.

use std::fmt::Write as _;

use crate::error::{MolrError, Result};
use crate::geometry::{IncidenceStructure, LineTag, PointTag};
use crate::latin::MolrSet;
use crate::symmetry::{ClassRecord, Flags};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MolrRecord {
    pub molr: MolrSet,
    pub aut: Option<u64>,
    pub flags: Option<Flags>,
}

impl MolrRecord {
    pub fn bare(molr: MolrSet) -> Self {
        MolrRecord { molr, aut: None, flags: None }
    }

    pub fn from_class(rec: &ClassRecord) -> Self {
        MolrRecord { molr: rec.representative.clone(), aut: Some(rec.aut_order), flags: Some(rec.flags) }
    }

    /// Checks header `aut` and `flags` against `rec`, computed for this record.
    pub fn check_header(&self, rec: &ClassRecord) -> std::result::Result<(), String> {
        if let Some(a) = self.aut {
            if a != rec.aut_order {
                return Err(format!("header aut={a}, computed {}", rec.aut_order));
            }
        }
        if let Some(f) = self.flags {
            if f != rec.flags {
                return Err(format!("header flags={}, computed {}", f.code(), rec.flags.code()));
            }
        }
        Ok(())
    }
}

fn perr(line: usize, msg: impl Into<String>) -> MolrError {
    MolrError::Parse { line, msg: msg.into() }
}

/// Strips a trailing comment and surrounding whitespace.
fn content(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

struct Header {
    n: usize,
    k: usize,
    t: usize,
    aut: Option<u64>,
    flags: Option<Flags>,
}

fn parse_header(text: &str, line: usize) -> Result<Header> {
    let mut words = text.split_whitespace();
    if words.next() != Some("MOLR") {
        return Err(perr(line, "expected a MOLR header"));
    }
    let (mut n, mut k, mut t, mut aut, mut flags) = (None, None, None, None, None);
    for w in words {
        let (key, val) = w.split_once('=').ok_or_else(|| perr(line, format!("malformed field {w:?}")))?;
        let num = || val.parse::<usize>().map_err(|_| perr(line, format!("bad value for {key}: {val:?}")));
        match key {
            "n" => n = Some(num()?),
            "k" => k = Some(num()?),
            "t" => t = Some(num()?),
            "aut" => aut = Some(val.parse::<u64>().map_err(|_| perr(line, format!("bad aut {val:?}")))?),
            "flags" => flags = Some(Flags::parse(val).ok_or_else(|| perr(line, format!("bad flags {val:?}")))?),
            _ => return Err(perr(line, format!("unknown field {key:?}"))),
        }
    }
    let need = |v: Option<usize>, name: &str| v.ok_or_else(|| perr(line, format!("missing {name}=")));
    Ok(Header { n: need(n, "n")?, k: need(k, "k")?, t: need(t, "t")?, aut, flags })
}

pub fn parse_records(text: &str) -> Result<Vec<MolrRecord>> {
    let lines: Vec<(usize, &str)> =
        text.lines().enumerate().map(|(i, l)| (i + 1, content(l))).filter(|(_, l)| !l.is_empty()).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let (hline, htext) = lines[i];
        let h = parse_header(htext, hline)?;
        if h.n == 0 || h.k == 0 || h.t == 0 {
            return Err(perr(hline, "n, k and t must be positive"));
        }
        let body = h.t * h.k;
        if i + 1 + body > lines.len() {
            return Err(perr(hline, format!("record needs {body} rows, file ends early")));
        }
        let mut cells = Vec::with_capacity(body * h.n);
        for &(ln, row) in &lines[i + 1..i + 1 + body] {
            let before = cells.len();
            for w in row.split_whitespace() {
                let x: u8 = w.parse().map_err(|_| perr(ln, format!("bad symbol {w:?}")))?;
                cells.push(x);
            }
            if cells.len() - before != h.n {
                return Err(perr(ln, format!("expected {} symbols, got {}", h.n, cells.len() - before)));
            }
        }
        let molr = MolrSet::from_flat(h.n, h.k, h.t, &cells).map_err(|e| perr(hline, e.to_string()))?;
        out.push(MolrRecord { molr, aut: h.aut, flags: h.flags });
        i += 1 + body;
    }
    Ok(out)
}

pub fn write_record(rec: &MolrRecord) -> String {
    let m = &rec.molr;
    let mut s = format!("MOLR n={} k={} t={}", m.n(), m.k(), m.t());
    if let Some(a) = rec.aut {
        write!(s, " aut={a}").unwrap();
    }
    if let Some(f) = rec.flags {
        write!(s, " flags={}", f.code()).unwrap();
    }
    s.push('\n');
    for q in 0..m.t() {
        for r in 0..m.k() {
            let row: Vec<String> = m.row(q, r).iter().map(|x| x.to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
    }
    s
}

pub fn write_records(recs: &[MolrRecord]) -> String {
    recs.iter().map(write_record).collect::<Vec<_>>().join("\n")
}

fn point_label(p: &PointTag) -> String {
    match p {
        PointTag::Cell { row, col } => format!("{row},{col}"),
        PointTag::Ideal(c) => format!("inf{c}"),
    }
}

/// `# points <v>` and one `# point <i> <label>` per point, then one line per
/// geometry line: its tag followed by the sorted point indices.
pub fn write_incidence(s: &IncidenceStructure) -> String {
    let mut out = format!("# points {}\n", s.n_points());
    for (i, p) in s.points.iter().enumerate() {
        writeln!(out, "# point {i} {}", point_label(p)).unwrap();
    }
    for (tag, line) in s.tags.iter().zip(&s.lines) {
        let pts: Vec<String> = line.iter().map(|p| p.to_string()).collect();
        writeln!(out, "{tag} {}", pts.join(" ")).unwrap();
    }
    out
}

/// Reads the output of [`write_incidence`].
pub fn parse_incidence(text: &str) -> Result<IncidenceStructure> {
    let mut points = Vec::new();
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let l = raw.trim();
        if let Some(rest) = l.strip_prefix("# point ") {
            let label = rest.split_whitespace().nth(1).ok_or_else(|| perr(ln, "missing point label"))?;
            let tag = if let Some(c) = label.strip_prefix("inf") {
                PointTag::Ideal(c.parse().map_err(|_| perr(ln, "bad ideal point"))?)
            } else {
                let (r, c) = label.split_once(',').ok_or_else(|| perr(ln, "bad point label"))?;
                PointTag::Cell {
                    row: r.parse().map_err(|_| perr(ln, "bad row"))?,
                    col: c.parse().map_err(|_| perr(ln, "bad column"))?,
                }
            };
            points.push(tag);
            continue;
        }
        let l = content(l);
        if l.is_empty() {
            continue;
        }
        let mut words = l.split_whitespace();
        let tag: LineTag = words.next().unwrap().parse().map_err(|e: String| perr(ln, e))?;
        let pts = words
            .map(|w| w.parse::<usize>().map_err(|_| perr(ln, format!("bad point {w:?}"))))
            .collect::<Result<Vec<_>>>()?;
        lines.push((tag, pts));
    }
    IncidenceStructure::new(points, lines)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::galois_mols;
    use crate::geometry::partial_net;

    #[test]
    fn record_round_trip() {
        let m = galois_mols(4).unwrap();
        let rec = MolrRecord { molr: m, aut: Some(288), flags: Some(Flags::parse("HTsHsT").unwrap()) };
        let text = write_records(&[rec.clone(), MolrRecord::bare(rec.molr.truncate_rows(2).unwrap())]);
        let back = parse_records(&text).unwrap();
        assert_eq!(back[0], rec);
        assert_eq!(write_records(&back), text);
    }

    #[test]
    fn comments_and_errors() {
        let text = "# header\nMOLR n=3 k=2 t=1 # trailing\n0 1 2\n1 2 0\n";
        assert_eq!(parse_records(text).unwrap().len(), 1);
        let bad = "MOLR n=3 k=2 t=1\n0 1 2\n1 2\n";
        assert_eq!(parse_records(bad).unwrap_err(), perr(3, "expected 3 symbols, got 2"));
        let bad = "MOLR n=3 k=2 t=1\n0 1 2\n0 2 1\n";
        assert!(matches!(parse_records(bad), Err(MolrError::Parse { line: 1, .. })));
        assert!(matches!(parse_records("MOLS n=3"), Err(MolrError::Parse { line: 1, .. })));
    }

    #[test]
    fn incidence_round_trip() {
        let net = partial_net(&galois_mols(3).unwrap().truncate_rows(2).unwrap());
        let text = write_incidence(&net);
        let back = parse_incidence(&text).unwrap();
        assert_eq!((back.points.clone(), back.lines.clone(), back.tags.clone()), (net.points, net.lines, net.tags));
    }
}
