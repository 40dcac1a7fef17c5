use std::collections::HashMap;

use timeslice_core::layout::layout_aggregate;
use timeslice_core::render::{build_panels, render_svg, PanelGeometry, PanelOptions, RenderOptions, Rgb};
use timeslice_core::slicing::{histeq_slicing, uniform_slicing};
use timeslice_core::synth::{synth_stream, SynthSpec};

fn attr(node: roxmltree::Node, name: &str) -> f64 {
    node.attribute(name).unwrap().parse().unwrap()
}

#[test]
fn svg_encodes_panels_faithfully() {
    let g = synth_stream(&SynthSpec::rugby(11)).unwrap();
    let s = histeq_slicing(&g, 12, 86_400.0).unwrap();
    let e = layout_aggregate(&g, 0, 200).unwrap();
    let panels = build_panels(&g, &s, &e, &PanelOptions::default()).unwrap();
    let options = RenderOptions::default();
    let svg = render_svg(&panels, &options).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let geo = PanelGeometry::new(&options);

    let groups: Vec<_> = doc
        .descendants()
        .filter(|n| n.attribute("class") == Some("panel"))
        .collect();
    assert_eq!(groups.len(), 12);

    let durations = s.durations();
    let mut first_seen: HashMap<String, (f64, f64)> = HashMap::new();
    let mut seen_counts: Vec<(usize, f64)> = Vec::new();
    for (l, group) in groups.iter().enumerate() {
        let bar = group
            .descendants()
            .find(|n| n.attribute("class") == Some("glyph-bar"))
            .unwrap();
        let expected = durations[l] / g.extent() * geo.glyph_width;
        assert!((attr(bar, "width") - expected).abs() <= 0.5);

        // panel-local coordinates agree across panels
        for circle in group.descendants().filter(|n| n.attribute("class") == Some("node")) {
            let label = circle.attribute("data-label").unwrap().to_owned();
            let local = (attr(circle, "cx"), attr(circle, "cy"));
            let (x, y) = *first_seen.entry(label).or_insert(local);
            assert!((x - local.0).abs() < 1e-9 && (y - local.1).abs() < 1e-9);
        }

        for line in group.descendants().filter(|n| n.attribute("class") == Some("edge")) {
            let count: usize = line.attribute("data-count").unwrap().parse().unwrap();
            seen_counts.push((count, attr(line, "stroke-width")));
        }
    }
    seen_counts.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    assert!(seen_counts.windows(2).all(|w| w[0].1 <= w[1].1));
    assert!(seen_counts.len() > 12);
}

#[test]
fn color_endpoints_are_exact() {
    // slice [0, 4): a-b sits at its start; slice [4, 8]: c-d sits at its end
    let g = timeslice_core::event_model::ingest_str("a,b,0\nc,d,3\nc,d,8\n").unwrap();
    let s = uniform_slicing(&g, 2).unwrap();
    let e = layout_aggregate(&g, 0, 50).unwrap();
    let panels = build_panels(&g, &s, &e, &PanelOptions::default()).unwrap();
    assert_eq!(panels[0].edges[0].color_param, 0.0);
    assert_eq!(panels[1].edges[0].color_param, 1.0);
    let svg = render_svg(&panels, &RenderOptions::default()).unwrap();
    assert!(svg.contains(&format!(r#"stroke="{}""#, Rgb::TEAL)));
    assert!(svg.contains(&format!(r#"stroke="{}""#, Rgb::BROWN)));
    assert!(svg.contains(r#"stroke="rgb(0,128,128)""#));
    assert!(svg.contains(r#"stroke="rgb(139,69,19)""#));
}

#[test]
fn longest_bar_belongs_to_longest_interval() {
    let g = synth_stream(&SynthSpec::rugby(5)).unwrap();
    let s = histeq_slicing(&g, 12, 86_400.0).unwrap();
    let e = layout_aggregate(&g, 0, 100).unwrap();
    let panels = build_panels(&g, &s, &e, &PanelOptions::default()).unwrap();
    let longest_bar = panels
        .iter()
        .max_by(|a, b| a.glyph.duration_fraction.total_cmp(&b.glyph.duration_fraction))
        .unwrap()
        .index;
    let durations = s.durations();
    let longest_interval = (0..durations.len())
        .max_by(|&a, &b| durations[a].total_cmp(&durations[b]))
        .unwrap()
        + 1;
    assert_eq!(longest_bar, longest_interval);
}

#[test]
fn all_nodes_option_draws_every_node() {
    let g = timeslice_core::event_model::ingest_str("a,b,0\nc,d,3\ne,f,8\n").unwrap();
    let s = uniform_slicing(&g, 3).unwrap();
    let e = layout_aggregate(&g, 0, 50).unwrap();
    let options = PanelOptions {
        all_nodes: true,
        ..PanelOptions::default()
    };
    for panel in build_panels(&g, &s, &e, &options).unwrap() {
        assert_eq!(panel.nodes.len(), 6);
    }
}
