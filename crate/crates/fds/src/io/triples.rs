//! `subject<TAB>verb<TAB>object` with `_` for an absent argument.

use std::fmt::Write as _;
use std::path::Path;

use fds_core::corpus::{resolve_triples, SurfaceTriple, SvoTriple, VocabPolicy, Vocabulary};

use super::{data_lines, read_to_string, tab_fields, write_string};
use crate::{Error, Result};

const ABSENT: &str = "_";

/// Parses triples TSV; `path` only labels errors.
pub fn parse_triples(path: &Path, text: &str) -> Result<Vec<SurfaceTriple>> {
    let arg = |s: &str| (s != ABSENT).then(|| s.to_string());
    data_lines(text)
        .map(|(line, l)| {
            let f = tab_fields(path, line, l, 3)?;
            if f.iter().any(|s| s.is_empty()) {
                return Err(Error::parse(path, line, "empty field"));
            }
            if f[1] == ABSENT {
                return Err(Error::parse(path, line, "verb is absent"));
            }
            SurfaceTriple::new(arg(f[0]), f[1].to_string(), arg(f[2]))
                .map_err(|_| Error::parse(path, line, "both arguments are absent"))
        })
        .collect()
}

pub fn read_triples(path: &Path) -> Result<Vec<SurfaceTriple>> {
    parse_triples(path, &read_to_string(path)?)
}

/// Reads and resolves a corpus against a built or reused vocabulary.
pub fn load_triples(path: &Path, policy: VocabPolicy) -> Result<(Vec<SvoTriple>, Vocabulary)> {
    let raw = read_triples(path)?;
    resolve_triples(&raw, policy).map_err(|e| Error::data(path, e))
}

pub fn write_triples(path: &Path, triples: &[SurfaceTriple]) -> Result<()> {
    write_string(path, &triples_tsv(triples))
}

pub fn triples_tsv(triples: &[SurfaceTriple]) -> String {
    let mut out = String::new();
    for t in triples {
        let arg = |a: &Option<String>| a.clone().unwrap_or_else(|| ABSENT.into());
        let _ = writeln!(out, "{}\t{}\t{}", arg(&t.subject), t.verb, arg(&t.object));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> &'static Path {
        Path::new("c.tsv")
    }

    #[test]
    fn fields_map_directly() {
        let t = parse_triples(p(), "# corpus\ndog\tchase\tcat\n\n_\tbark\tdog\r\n").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].subject.as_deref(), Some("dog"));
        assert_eq!(t[0].object.as_deref(), Some("cat"));
        assert_eq!(t[1].subject, None);
        assert_eq!(t[1].object.as_deref(), Some("dog"));
    }

    #[test]
    fn errors_name_the_line() {
        let e = parse_triples(p(), "dog\tchase\tcat\n_\tbark\t_\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        let e = parse_triples(p(), "dog\tchase\n").unwrap_err();
        assert_eq!(e.to_string(), "c.tsv:1: expected 3 tab-separated fields, found 2");
        let e = parse_triples(p(), "# x\ndog\t_\tcat\n").unwrap_err();
        assert!(e.to_string().contains(":2: verb is absent"));
    }

    #[test]
    fn tsv_round_trip() {
        let text = "dog\tchase\tcat\n_\tbark\tdog\ncat\tsleep\t_\n";
        let t = parse_triples(p(), text).unwrap();
        assert_eq!(triples_tsv(&t), text);
    }
}
