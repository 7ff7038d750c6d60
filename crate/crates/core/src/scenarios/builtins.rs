use serde::Serialize;

use super::config::{parse_scenarios, Expectation, Scenario};

/// A catalogue entry for a shipped scenario.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BuiltinInfo {
    pub name: &'static str,
    pub description: &'static str,
    pub anchor: &'static str,
    pub expect: Expectation,
}

struct Builtin {
    name: &'static str,
    description: &'static str,
    anchor: &'static str,
    json: &'static str,
}

const DISK: &str = r#""space": {"norm": {"kind": "euclidean", "dim": 2}}, "body": {"kind": "norm_ball", "radius": 1}"#;
const MIDEAL: &str = r#""space": {"norm": {"kind": "linf", "dim": 3}}, "body": {"kind": "coordinate_subspace", "dim": 3, "keep": [0, 1]}"#;

const BUILTINS: &[Builtin] = &[
    Builtin {
        name: "e5",
        description: "Disk, x = (2,0), alpha = 2: the point (0,0) lies within alpha of x but at distance 1 from the projection",
        anchor: "disk example where near points miss the projection",
        json: r#"{"check": "lz_falsify", DISK, "params": {"x": [2, 0], "alpha": 2, "epsilon": 0.5}}"#,
    },
    Builtin {
        name: "zsum-halfball",
        description: "Unit ball of the Euclidean plane X inside the sup-sum of X and R: the 1.5-ball identity fails by sqrt(2)-1",
        anchor: "sup direct sum counterexample to the 1.5-ball identity",
        json: r#"{"check": "half_ball", "expect": "fail",
            "space": {"norm": {"kind": "sup_direct_sum", "inner": {"kind": "euclidean", "dim": 2}, "extra": 1}},
            "body": {"kind": "subspace_ball", "basis": [[1, 0, 0], [0, 1, 0]], "radius": 1},
            "params": {"x": [1, 1, 0], "y": [0.7071067811865476, 0.7071067811865476, 1]}}"#,
    },
    Builtin {
        name: "linf3-mideal-halfball",
        description: "The plane x3 = 0 in l_inf^3 satisfies the 1.5-ball identity on 200 random pairs",
        anchor: "M-ideal subspaces satisfy the 1.5-ball identity",
        json: r#"{"check": "half_ball", MIDEAL, "params": {"samples": 200}}"#,
    },
    Builtin {
        name: "mideal-ball-halfball",
        description: "The unit ball of the plane x3 = 0 in l_inf^3 satisfies the 1.5-ball identity on 200 random pairs",
        anchor: "balls of M-ideals satisfy the 1.5-ball identity",
        json: r#"{"check": "half_ball",
            "space": {"norm": {"kind": "linf", "dim": 3}},
            "body": {"kind": "subspace_ball", "basis": [[1, 0, 0], [0, 1, 0]], "radius": 1},
            "params": {"samples": 200}}"#,
    },
    Builtin {
        name: "euclid-line-halfball",
        description: "The diagonal line of the Euclidean plane violates the 1.5-ball identity at x = (1,0), y = 0",
        anchor: "Hilbert space lines are not M-ideals",
        json: r#"{"check": "half_ball", "expect": "fail",
            "space": {"norm": {"kind": "euclidean", "dim": 2}},
            "body": {"kind": "subspace", "basis": [[1, 1]]},
            "params": {"x": [1, 0], "y": [0, 0]}}"#,
    },
    Builtin {
        name: "triangle-3balls",
        description: "Three unit disks centred on an equilateral triangle of side 2 meet pairwise but not jointly",
        anchor: "the Euclidean plane lacks the 3.2 intersection property",
        json: r#"{"check": "three_two_ip", "expect": "fail",
            "space": {"norm": {"kind": "euclidean", "dim": 2}},
            "params": {"trials": 10, "seeded": [{"centers": [[0, 0], [2, 0], [1, 1.7320508075688772]], "radii": [1, 1, 1]}]}}"#,
    },
    Builtin {
        name: "linf-32ip",
        description: "l_inf^3 passes 1000 pairwise-intersecting random ball triples",
        anchor: "L1-preduals have the 3.2 intersection property",
        json: r#"{"check": "three_two_ip", "space": {"norm": {"kind": "linf", "dim": 3}}, "params": {"trials": 1000}}"#,
    },
    Builtin {
        name: "l1-32ip",
        description: "l_1^2 (isometric to l_inf^2) passes 1000 pairwise-intersecting random ball triples",
        anchor: "two-dimensional l1 is an L1-predual",
        json: r#"{"check": "three_two_ip", "space": {"norm": {"kind": "l1", "dim": 2}}, "params": {"trials": 1000}}"#,
    },
    Builtin {
        name: "disk-strong-modulus",
        description: "Strong proximinality modulus of the unit disk at x = (2,0) for epsilon = 0.5",
        anchor: "uniformly convex bodies are strongly proximinal",
        json: r#"{"check": "strong_modulus", "expect": "estimate", DISK,
            "params": {"x": [2, 0], "epsilon": 0.5, "excess_at": [0.21]}}"#,
    },
    Builtin {
        name: "mideal-uniform-modulus",
        description: "Uniform proximinality modulus of the plane x3 = 0 in l_inf^3 for epsilon = 0.3, R = 2",
        anchor: "M-ideals are uniformly proximinal with modulus epsilon",
        json: r#"{"check": "uniform_modulus", "expect": "estimate", MIDEAL, "params": {"epsilon": 0.3, "radius": 2}}"#,
    },
    Builtin {
        name: "disk-uniform-modulus",
        description: "Uniform proximinality modulus of the unit disk for epsilon = 0.5, R = 2",
        anchor: "uniformly convex bodies are uniformly proximinal",
        json: r#"{"check": "uniform_modulus", "expect": "estimate", DISK,
            "params": {"epsilon": 0.5, "radius": 2, "budget": {"x_samples": 16, "y_rays": 16, "y_levels": 8}}}"#,
    },
    Builtin {
        name: "lift-subspace-sweep",
        description: "Distance to L_p(I,Y): pointwise formula against the joint program on 200 random instances",
        anchor: "distance formula for Bochner subspaces",
        json: r#"{"check": "lift_subspace", "params": {"random": {}}}"#,
    },
    Builtin {
        name: "lift-ball-sweep",
        description: "Distance to the unit ball of L_p(I,Y): the pointwise formula overestimates the coupled program on uneven functions",
        anchor: "distance formula for Bochner balls",
        json: r#"{"check": "lift_ball", "expect": "fail", "params": {"random": {"exponents": [1, 2]}}}"#,
    },
    Builtin {
        name: "lift-ball-pointwise",
        description: "Pointwise projection onto B_Y is not a nearest point of the unit ball of L_p(I,Y) for p < inf",
        anchor: "pointwise selections of ball projections",
        json: r#"{"check": "lift_ball", "expect": "fail", "params": {"random": {}, "pointwise_projection": true}}"#,
    },
    Builtin {
        name: "lift-projection-set",
        description: "Distance to the projection set of a lifted subspace: formula against the g-distance program",
        anchor: "distance to lifted projection sets",
        json: r#"{"check": "lift_projection_set", "params": {"random": {"count": 60}}}"#,
    },
    Builtin {
        name: "lift-modulus-constant",
        description: "Constant step function: the lifted strong modulus equals the base modulus on the disk",
        anchor: "strong proximinality passes to Bochner spaces",
        json: r#"{"check": "lift_modulus", DISK, "params": {"x": [2, 0], "epsilon": 0.5, "p": 2, "pieces": 1, "equal_to_base": true}}"#,
    },
    Builtin {
        name: "lift-modulus-mideal",
        description: "Four-piece lift of the l_inf^3 M-ideal keeps modulus at least epsilon for p = 1",
        anchor: "lifted moduli of M-ideals",
        json: r#"{"check": "lift_modulus", MIDEAL,
            "params": {"x": [0.5, -0.25, 1], "epsilon": 0.3, "p": 1, "pieces": 4, "min_lifted": 0.299}}"#,
    },
    Builtin {
        name: "jensen-average",
        description: "The norm of the average never exceeds the L_p norm, on 200 random step functions",
        anchor: "averages of step functions",
        json: r#"{"check": "average", "params": {"samples": 200}}"#,
    },
    Builtin {
        name: "continuity-disk",
        description: "Projection onto the unit disk moves by at most 0.2 when x = (2,0) moves by 0.1",
        anchor: "continuity of metric projections",
        json: r#"{"check": "continuity_probe", DISK, "params": {"x": [2, 0], "radius": 0.1, "bound": 0.2, "sweep": true}}"#,
    },
    Builtin {
        name: "linf-segment-projection",
        description: "Projecting (0,1) onto the x-axis of l_inf^2 gives the segment [-1,1] x {0}",
        anchor: "non-unique projections in sup norms",
        json: r#"{"check": "project",
            "space": {"norm": {"kind": "linf", "dim": 2}},
            "body": {"kind": "coordinate_subspace", "dim": 2, "keep": [0]},
            "params": {"x": [0, 1], "expected_distance": 1, "expected_points": [[-1, 0], [1, 0]]}}"#,
    },
    Builtin {
        name: "lz-at-distance",
        description: "For alpha equal to the distance the disk admits no far point at level epsilon",
        anchor: "strong proximinality of the disk",
        json: r#"{"check": "lz_falsify", DISK, "params": {"x": [2, 0], "alpha": 1, "epsilon": 0.5, "expect_witness": false}}"#,
    },
];

fn expand(b: &Builtin) -> String {
    let named = b.json.replacen('{', &format!(r#"{{"name": "{}", "description": "{}", "#, b.name, b.description), 1);
    named.replace("DISK", DISK).replace("MIDEAL", MIDEAL)
}

/// Every built-in scenario with its description and anchor.
pub fn list_builtins() -> Vec<BuiltinInfo> {
    BUILTINS
        .iter()
        .map(|b| BuiltinInfo {
            name: b.name,
            description: b.description,
            anchor: b.anchor,
            expect: builtin(b.name).map(|s| s.expect).unwrap_or_default(),
        })
        .collect()
}

/// The built-in scenario named `name`.
pub fn builtin(name: &str) -> Option<Scenario> {
    let b = BUILTINS.iter().find(|b| b.name == name)?;
    let mut parsed = parse_scenarios(&expand(b)).expect("built-in scenarios parse");
    parsed.pop()
}
