//! Gmsh MSH 2.2 ASCII subset: `$MeshFormat`, `$Nodes`, `$Elements`.
//! Only 4-node tetrahedra (element type 4) are read; other elements and
//! unknown sections are skipped.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{Mesh, DEGENERATE_RATIO};
use crate::geometry::{signed_volume, tet_diameter, Vec3};
use crate::{Error, Result};

const TET4: usize = 4;

/// Result of [`parse_msh`].
#[derive(Debug, Clone)]
pub struct ParsedMsh {
    pub mesh: Mesh,
    /// Tets whose last two vertices were swapped to make the volume positive.
    pub reoriented: usize,
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next_nonempty(&mut self) -> Option<&'a str> {
        for (i, l) in self.inner.by_ref() {
            self.line = i + 1;
            let t = l.trim();
            if !t.is_empty() {
                return Some(t);
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<&'a str> {
        self.next_nonempty().ok_or_else(|| Error::MshParse {
            line: self.line,
            message: format!("unexpected end of input, expected {what}"),
        })
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::MshParse {
            line: self.line,
            message: message.into(),
        }
    }
}

fn parse_num<T: std::str::FromStr>(lines: &Lines, tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| lines.err(format!("missing {what}")))?;
    tok.parse().map_err(|_| lines.err(format!("invalid {what} `{tok}`")))
}

fn expect_end(lines: &mut Lines, section: &str) -> Result<()> {
    let end = lines.expect(&format!("$End{section}"))?;
    if end != format!("$End{section}") {
        return Err(lines.err(format!("expected $End{section}, found `{end}`")));
    }
    Ok(())
}

pub fn parse_msh(text: &str) -> Result<ParsedMsh> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        line: 0,
    };
    let mut have_format = false;
    let mut nodes: Option<(Vec<Vec3>, HashMap<usize, usize>)> = None;
    let mut raw_tets: Option<Vec<([usize; 4], usize)>> = None;

    while let Some(header) = lines.next_nonempty() {
        let Some(name) = header.strip_prefix('$') else {
            return Err(lines.err(format!("expected section header, found `{header}`")));
        };
        match name {
            "MeshFormat" => {
                let l = lines.expect("format line")?;
                let mut it = l.split_whitespace();
                let version = it.next().unwrap_or("");
                if version != "2.2" {
                    return Err(lines.err(format!("unsupported MSH version `{version}`, need 2.2")));
                }
                let file_type: u32 = parse_num(&lines, it.next(), "file type")?;
                if file_type != 0 {
                    return Err(lines.err("binary MSH is not supported"));
                }
                expect_end(&mut lines, "MeshFormat")?;
                have_format = true;
            }
            "Nodes" => {
                let l = lines.expect("node count")?;
                let count: usize = parse_num(&lines, Some(l), "node count")?;
                let mut coords = Vec::with_capacity(count);
                let mut index = HashMap::with_capacity(count);
                for _ in 0..count {
                    let l = lines.expect("node line")?;
                    let mut it = l.split_whitespace();
                    let id: usize = parse_num(&lines, it.next(), "node id")?;
                    let x: f64 = parse_num(&lines, it.next(), "x coordinate")?;
                    let y: f64 = parse_num(&lines, it.next(), "y coordinate")?;
                    let z: f64 = parse_num(&lines, it.next(), "z coordinate")?;
                    if index.insert(id, coords.len()).is_some() {
                        return Err(lines.err(format!("duplicate node id {id}")));
                    }
                    coords.push(Vec3::new(x, y, z));
                }
                expect_end(&mut lines, "Nodes")?;
                nodes = Some((coords, index));
            }
            "Elements" => {
                let l = lines.expect("element count")?;
                let count: usize = parse_num(&lines, Some(l), "element count")?;
                let mut tets = Vec::new();
                for _ in 0..count {
                    let l = lines.expect("element line")?;
                    let fields: Vec<&str> = l.split_whitespace().collect();
                    let _id: usize = parse_num(&lines, fields.first().copied(), "element id")?;
                    let ty: usize = parse_num(&lines, fields.get(1).copied(), "element type")?;
                    let ntags: usize = parse_num(&lines, fields.get(2).copied(), "tag count")?;
                    if ty != TET4 {
                        continue;
                    }
                    let nodes_at = 3 + ntags;
                    if fields.len() != nodes_at + 4 {
                        return Err(lines.err(format!(
                            "tetrahedron needs 4 node ids after {ntags} tags, line has {} fields",
                            fields.len()
                        )));
                    }
                    let mut tet = [0usize; 4];
                    for (k, v) in tet.iter_mut().enumerate() {
                        *v = parse_num(&lines, Some(fields[nodes_at + k]), "node id")?;
                    }
                    tets.push((tet, lines.line));
                }
                expect_end(&mut lines, "Elements")?;
                raw_tets = Some(tets);
            }
            other => {
                if other.starts_with("End") {
                    return Err(lines.err(format!("unmatched `{header}`")));
                }
                let end = format!("$End{other}");
                loop {
                    match lines.next_nonempty() {
                        Some(l) if l == end => break,
                        Some(_) => {}
                        None => return Err(lines.err(format!("section `{header}` not closed"))),
                    }
                }
            }
        }
    }

    if !have_format {
        return Err(Error::MissingSection("MeshFormat"));
    }
    let (coords, index) = nodes.ok_or(Error::MissingSection("Nodes"))?;
    let raw_tets = raw_tets.ok_or(Error::MissingSection("Elements"))?;

    let mut tets = Vec::with_capacity(raw_tets.len());
    let mut reoriented = 0;
    for (ids, line) in raw_tets {
        let mut tet = [0usize; 4];
        for (slot, id) in tet.iter_mut().zip(ids) {
            *slot = *index.get(&id).ok_or_else(|| Error::MshParse {
                line,
                message: format!("node {id} referenced but not declared"),
            })?;
        }
        let v = tet.map(|i| coords[i]);
        let vol = signed_volume(&v[0], &v[1], &v[2], &v[3]);
        let threshold = DEGENERATE_RATIO * tet_diameter(&v).powi(3);
        if !(vol.abs() >= threshold) || threshold == 0.0 {
            return Err(Error::MshParse {
                line,
                message: format!("degenerate tetrahedron (volume {vol:e})"),
            });
        }
        if vol < 0.0 {
            tet.swap(2, 3);
            reoriented += 1;
        }
        tets.push(tet);
    }
    Ok(ParsedMsh {
        mesh: Mesh::new(coords, tets)?,
        reoriented,
    })
}

/// Serialize with 1-based ids and 17 significant digits per coordinate.
pub fn write_msh(mesh: &Mesh) -> String {
    let mut s = String::new();
    s.push_str("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n");
    let _ = writeln!(s, "$Nodes\n{}", mesh.num_vertices());
    for (i, v) in mesh.vertices().iter().enumerate() {
        let _ = writeln!(s, "{} {:.16e} {:.16e} {:.16e}", i + 1, v.x, v.y, v.z);
    }
    s.push_str("$EndNodes\n");
    let _ = writeln!(s, "$Elements\n{}", mesh.num_tets());
    for (i, t) in mesh.tets().iter().enumerate() {
        let _ = writeln!(
            s,
            "{} {TET4} 2 1 1 {} {} {} {}",
            i + 1,
            t[0] + 1,
            t[1] + 1,
            t[2] + 1,
            t[3] + 1
        );
    }
    s.push_str("$EndElements\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_topology, generate_box_mesh};

    const ONE_TET: &str = "$MeshFormat
2.2 0 8
$EndMeshFormat
$Nodes
4
1 0 0 0
2 1 0 0
3 0 1 0
4 0 0 1
$EndNodes
$Elements
3
1 15 2 0 1 1
2 1 2 0 1 1 2
3 4 2 0 1 1 3 2 4
$EndElements
";

    #[test]
    fn reorients_negative_tet() {
        let parsed = parse_msh(ONE_TET).unwrap();
        assert_eq!(parsed.reoriented, 1);
        assert_eq!(parsed.mesh.num_tets(), 1);
        assert!(parsed.mesh.tet_volume(0) > 0.0);
        assert_eq!(parsed.mesh.tets()[0], [0, 2, 3, 1]);
    }

    #[test]
    fn missing_nodes_is_named() {
        let text = "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Elements\n0\n$EndElements\n";
        let err = parse_msh(text).unwrap_err();
        assert!(matches!(err, Error::MissingSection("Nodes")));
        assert!(err.to_string().contains("$Nodes"));
    }

    #[test]
    fn wrong_version_rejected() {
        let text = ONE_TET.replace("2.2 0 8", "4.1 0 8");
        assert!(matches!(parse_msh(&text), Err(Error::MshParse { line: 2, .. })));
    }

    #[test]
    fn undeclared_node_reports_line() {
        let text = ONE_TET.replace("3 4 2 0 1 1 3 2 4", "3 4 2 0 1 1 3 2 9");
        match parse_msh(&text) {
            Err(Error::MshParse { line, message }) => {
                assert_eq!(line, 15);
                assert!(message.contains("node 9"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn degenerate_tet_reports_line() {
        let text = ONE_TET.replace("4 0 0 1", "4 1 1 0");
        assert!(matches!(parse_msh(&text), Err(Error::MshParse { line: 15, .. })));
    }

    #[test]
    fn malformed_header() {
        let text = ONE_TET.replace("$Nodes", "Nodes");
        assert!(matches!(parse_msh(&text), Err(Error::MshParse { .. })));
        let text = ONE_TET.replace("$EndNodes", "$EndNode");
        assert!(matches!(parse_msh(&text), Err(Error::MshParse { .. })));
    }

    #[test]
    fn skips_unknown_sections() {
        let text = ONE_TET.replace("$Nodes", "$PhysicalNames\n1\n3 1 \"vol\"\n$EndPhysicalNames\n$Nodes");
        assert_eq!(parse_msh(&text).unwrap().mesh.num_tets(), 1);
    }

    #[test]
    fn box_round_trip() {
        let mesh = generate_box_mesh(2).unwrap();
        let text = write_msh(&mesh);
        let parsed = parse_msh(&text).unwrap();
        assert_eq!(parsed.reoriented, 0);
        assert_eq!(parsed.mesh, mesh);
        let (a, b) = (build_topology(&mesh).unwrap(), build_topology(&parsed.mesh).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn unit_box_has_six_tets() {
        let text = write_msh(&generate_box_mesh(1).unwrap());
        let elements = text.split("$Elements\n").nth(1).unwrap();
        let tets = elements
            .lines()
            .skip(1)
            .take_while(|l| !l.starts_with('$'))
            .filter(|l| l.split_whitespace().nth(1) == Some("4"))
            .count();
        assert_eq!(tets, 6);
    }

    #[test]
    fn empty_mesh() {
        let mesh = Mesh::new(vec![], vec![]).unwrap();
        let text = write_msh(&mesh);
        assert!(text.contains("$Nodes\n0\n$EndNodes"));
        assert!(text.contains("$Elements\n0\n$EndElements"));
        assert_eq!(parse_msh(&text).unwrap().mesh, mesh);
    }
}
