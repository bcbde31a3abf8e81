//! Small named diagrams used by tests, examples and the acceptance suite.

use crate::clasper::Clasper;
use crate::diagram::Diagram;
use crate::text::{parse_diagram, parse_document, serialize_diagram};

const INTERVAL: &str = "skeleton S { interval c1; }\n";

pub fn parse_one(src: &str) -> Diagram {
    parse_diagram(src).expect("fixture parses")
}

fn on_interval(body: &str) -> Diagram {
    parse_one(&format!("{INTERVAL}diagram D on S {{ {body} }}"))
}

/// One chord on one interval: degree 1.
pub fn chord() -> Diagram {
    on_interval("legs: a@c1, b@c1; edges: a-b;")
}

/// One trivalent vertex with three legs: degree 2.
pub fn y_diagram() -> Diagram {
    on_interval("legs: a@c1, b@c1, c@c1; vertices: v(x,y,z); edges: a-x, b-y, c-z;")
}

/// Two vertices joined by a double edge, one leg each: degree 2, one cycle.
pub fn theta() -> Diagram {
    on_interval("legs: a@c1, b@c1; vertices: x(x1,x2,x3), y(y1,y2,y3); edges: a-x1, b-y1, x2-y2, x3-y3;")
}

pub fn circle_theta() -> Diagram {
    parse_one(
        "skeleton S { circle c1; }\n\
         diagram D on S { legs: a@c1, b@c1; vertices: x(x1,x2,x3), y(y1,y2,y3); edges: a-x1, b-y1, x2-y2, x3-y3; }",
    )
}

/// A vertex with a loop edge and one leg: degree 1, zero by antisymmetry.
pub fn tadpole() -> Diagram {
    on_interval("legs: a@c1; vertices: v(x,y,z); edges: a-x, y-z;")
}

/// Theta with no legs at all.
pub fn legless_theta() -> Diagram {
    on_interval("vertices: x(x1,x2,x3), y(y1,y2,y3); edges: x1-y1, x2-y2, x3-y3;")
}

/// Triangle of vertices, one leg on each: degree 3.
pub fn wheel3() -> Diagram {
    on_interval(
        "legs: a@c1, b@c1, c@c1; vertices: p(p1,p2,p3), q(q1,q2,q3), r(r1,r2,r3); \
         edges: a-p1, b-q1, c-r1, p2-q3, q2-r3, r2-p3;",
    )
}

/// Two triangles sharing an edge, legs at the two far corners: degree 3,
/// two independent cycles.
pub fn two_cycles() -> Diagram {
    on_interval(
        "legs: a@c1, b@c1; vertices: x(x1,x2,x3), y(y1,y2,y3), z(z1,z2,z3), w(w1,w2,w3); \
         edges: a-x1, x2-y1, x3-z1, y2-z2, y3-w2, z3-w3, w1-b;",
    )
}

/// Centre vertex with a leg, joined to two bigon blobs that each carry a
/// leg: degree 4. The centre leg comes first; removing the centre splits the
/// diagram into two thetas.
pub fn dumbbell() -> Diagram {
    on_interval(
        "legs: b@c1, a@c1, c@c1; \
         vertices: v(v1,v2,v3), p(p1,p2,p3), q(q1,q2,q3), r(r1,r2,r3), s(s1,s2,s3); \
         edges: b-v1, v2-p1, p2-q2, p3-q3, q1-a, v3-r1, r2-s2, r3-s3, s1-c;",
    )
}

/// A bigon whose two vertices carry pendant vertices; the legs sit on the
/// pendants only, at distance 1 from the cycle. Degree 4.
pub fn bigon_with_pendant_chain() -> Diagram {
    on_interval(
        "legs: a@c1, b@c1, c@c1, d@c1; \
         vertices: p(p1,p2,p3), q(q1,q2,q3), r(r1,r2,r3), s(s1,s2,s3); \
         edges: p2-q2, p3-q3, p1-r1, q1-s1, r2-a, r3-b, s2-c, s3-d;",
    )
}

/// Two chords that cross.
pub fn crossing_chords() -> Diagram {
    on_interval("legs: a@c1, b@c1, c@c1, d@c1; edges: a-c, b-d;")
}

pub fn all() -> Vec<Diagram> {
    named().into_iter().map(|(_, d)| d).collect()
}

pub fn named() -> Vec<(&'static str, Diagram)> {
    vec![
        ("chord", chord()),
        ("y", y_diagram()),
        ("theta", theta()),
        ("circle_theta", circle_theta()),
        ("tadpole", tadpole()),
        ("legless_theta", legless_theta()),
        ("wheel3", wheel3()),
        ("two_cycles", two_cycles()),
        ("dumbbell", dumbbell()),
        ("bigon_with_pendant_chain", bigon_with_pendant_chain()),
        ("crossing_chords", crossing_chords()),
    ]
}

fn clasper_on_interval(body: &str) -> Clasper {
    let doc = parse_document(&format!("{INTERVAL}clasper C on S {{ {body} }}")).expect("fixture parses");
    doc.claspers.into_iter().next().expect("one clasper").1
}

const CHORD_CLASPER: &str = "leaf A @ c1; leaf B @ c1; edge A-B;";
const THETA_CLASPER: &str = "leaf A @ c1; leaf B @ c1; node X; node Y; edge A-X; edge X-Y; edge X-Y; edge B-Y;";
const DUMBBELL_CLASPER: &str = "leaf B @ c1; leaf A @ c1; leaf C @ c1; node V; node P; node Q; node R; node S; \
     edge B-V; edge V-P; edge P-Q; edge P-Q; edge Q-A; edge V-R; edge R-S; edge R-S; edge S-C;";

/// Two disk-leaves joined by an edge.
pub fn chord_clasper() -> Clasper {
    clasper_on_interval(CHORD_CLASPER)
}

/// Two nodes joined by a double edge, one disk-leaf on each.
pub fn theta_clasper() -> Clasper {
    clasper_on_interval(THETA_CLASPER)
}

/// Clasper whose shadow is [`dumbbell`].
pub fn dumbbell_clasper() -> Clasper {
    clasper_on_interval(DUMBBELL_CLASPER)
}

/// Every fixture as a standalone text document holding one item.
pub fn documents() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = named()
        .into_iter()
        .map(|(name, d)| {
            (
                name.to_string(),
                format!("{}\n{}\n", d.skeleton(), serialize_diagram(&d, "D")),
            )
        })
        .collect();
    for (name, body) in [
        ("chord_clasper", CHORD_CLASPER),
        ("theta_clasper", THETA_CLASPER),
        ("dumbbell_clasper", DUMBBELL_CLASPER),
    ] {
        out.push((name.to_string(), format!("{INTERVAL}clasper C on S {{ {body} }}\n")));
    }
    out
}
