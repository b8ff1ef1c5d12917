//! Graph exports: plain edge-list csv and attributed GraphML for external
//! visualization tools.

use std::io::Write;

/// Node attributes carried into the GraphML export.
#[derive(Debug, Clone, Default)]
pub struct ExportNode {
    pub id: String,
    /// "transaction", "address", "user", ...
    pub kind: Option<String>,
    pub class: Option<String>,
    pub time_step: Option<u32>,
}

/// Writes `source,target` rows with a header.
pub fn write_edge_list(
    edges: impl IntoIterator<Item = (String, String)>,
    mut sink: impl Write,
) -> std::io::Result<()> {
    writeln!(sink, "source,target")?;
    for (s, t) in edges {
        writeln!(sink, "{s},{t}")?;
    }
    Ok(())
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Writes an attributed directed graph in GraphML. Node kind, class label,
/// and time step are emitted as node attributes when present.
pub fn write_graphml(
    nodes: &[ExportNode],
    edges: &[(String, String)],
    mut sink: impl Write,
) -> std::io::Result<()> {
    writeln!(sink, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(
        sink,
        r#"<graphml xmlns="http://graphml.graphdrawing.org/xmlns">"#
    )?;
    writeln!(
        sink,
        r#"  <key id="kind" for="node" attr.name="kind" attr.type="string"/>"#
    )?;
    writeln!(
        sink,
        r#"  <key id="class" for="node" attr.name="class" attr.type="string"/>"#
    )?;
    writeln!(
        sink,
        r#"  <key id="time_step" for="node" attr.name="time_step" attr.type="int"/>"#
    )?;
    writeln!(sink, r#"  <graph edgedefault="directed">"#)?;
    for node in nodes {
        let id = xml_escape(&node.id);
        if node.kind.is_none() && node.class.is_none() && node.time_step.is_none() {
            writeln!(sink, r#"    <node id="{id}"/>"#)?;
            continue;
        }
        writeln!(sink, r#"    <node id="{id}">"#)?;
        if let Some(kind) = &node.kind {
            writeln!(sink, r#"      <data key="kind">{}</data>"#, xml_escape(kind))?;
        }
        if let Some(class) = &node.class {
            writeln!(sink, r#"      <data key="class">{}</data>"#, xml_escape(class))?;
        }
        if let Some(step) = node.time_step {
            writeln!(sink, r#"      <data key="time_step">{step}</data>"#)?;
        }
        writeln!(sink, r#"    </node>"#)?;
    }
    for (s, t) in edges {
        writeln!(
            sink,
            r#"    <edge source="{}" target="{}"/>"#,
            xml_escape(s),
            xml_escape(t)
        )?;
    }
    writeln!(sink, r#"  </graph>"#)?;
    writeln!(sink, r#"</graphml>"#)?;
    Ok(())
}
