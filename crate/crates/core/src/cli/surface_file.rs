//! The line-based surface file format.
//!
//! ```text
//! boundary <name> [<point> ...]     marked points counterclockwise
//! edge <name> <point> <point>
//! order <point> <half-edge> ...     clockwise, half-edges as name.0 / name.1
//! hole <boundary> in <edge>
//! # comment
//! ```

use crate::error::{Error, Result};
use crate::surface::{MarkedSurfaceSpec, Quasitriangulation, SurfaceBuilder};

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::SyntaxError { position, message: message.into() }
}

/// Parse a surface file and validate the quasitriangulation it describes.
pub fn parse_surface(text: &str) -> Result<(MarkedSurfaceSpec, Quasitriangulation)> {
    let mut b = SurfaceBuilder::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let start = offset;
        offset += line.len();
        let content = line.split('#').next().unwrap_or("");
        let mut words = Vec::new();
        let mut pos = 0;
        for w in content.split_whitespace() {
            let at = content[pos..].find(w).expect("word comes from the line") + pos;
            pos = at + w.len();
            words.push((w, start + at));
        }
        let Some(&(keyword, kpos)) = words.first() else { continue };
        let args = &words[1..];
        match keyword {
            "boundary" => {
                let Some(&(name, _)) = args.first() else {
                    return Err(syntax(kpos, "`boundary` needs a name"));
                };
                b.components.push((name.into(), args[1..].iter().map(|(p, _)| p.to_string()).collect()));
            }
            "edge" => {
                let [(name, _), (p0, _), (p1, _)] = args else {
                    return Err(syntax(kpos, "`edge` takes a name and two points"));
                };
                b.edges.push((name.to_string(), p0.to_string(), p1.to_string()));
            }
            "order" => {
                let Some(&(point, _)) = args.first() else {
                    return Err(syntax(kpos, "`order` needs a point"));
                };
                let mut hs = Vec::new();
                for &(h, hpos) in &args[1..] {
                    let parsed = h.rsplit_once('.').and_then(|(e, end)| match end {
                        "0" => Some((e.to_string(), 0u8)),
                        "1" => Some((e.to_string(), 1u8)),
                        _ => None,
                    });
                    hs.push(parsed.ok_or_else(|| syntax(hpos, format!("half-edge `{h}` must end in .0 or .1")))?);
                }
                b.orders.push((point.into(), hs));
            }
            "hole" => {
                let [(hole, _), ("in", _), (edge, _)] = args else {
                    return Err(syntax(kpos, "expected `hole <boundary> in <edge>`"));
                };
                b.holes.push((hole.to_string(), edge.to_string()));
            }
            other => return Err(syntax(kpos, format!("unknown statement `{other}`"))),
        }
    }
    let q = b.build()?;
    Ok((q.surface().clone(), q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{builtin, BUILTINS};

    #[test]
    fn printed_builtins_parse_back() {
        for name in BUILTINS {
            let (s, q) = builtin(name).unwrap();
            let (s2, q2) = parse_surface(&q.to_surface_file()).unwrap();
            assert_eq!((s2, q2), (s, q), "{name}");
        }
    }

    #[test]
    fn comments_and_errors() {
        assert_eq!(parse_surface("# nothing here\n\n").unwrap_err(), Error::EmptySurface);
        assert!(matches!(parse_surface("edge a p\n"), Err(Error::SyntaxError { position: 0, .. })));
        assert!(matches!(parse_surface("bogus x\n"), Err(Error::SyntaxError { .. })));
        let text = "boundary o p1 p2 p3\nedge a p1 p2\norder p1 a.2\n";
        assert!(matches!(parse_surface(text), Err(Error::SyntaxError { position: 42, .. })));
        let (_, q) = builtin("quad").unwrap();
        let missing: String = q.to_surface_file().lines().filter(|l| !l.starts_with("order p4")).map(|l| format!("{l}\n")).collect();
        assert!(matches!(parse_surface(&missing), Err(Error::InvalidQuasitriangulation(_))));
    }
}
