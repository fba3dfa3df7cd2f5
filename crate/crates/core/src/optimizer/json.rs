//! JSON documents for solutions and feasibility answers.
//!
//! Rationals are `{"num": .., "den": ..}` with integers, falling back to
//! decimal strings when a part does not fit in 64 bits. Documents render on
//! one line with `": "` and `", "` separators.

use std::io;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::ser::Formatter;
use serde_json::{json, Value};

use super::{Instance, Solution};
use crate::feasibility::{Feasibility, Placement};
use crate::numeric::{ratio_to_f64, Scalar};

fn integer(i: &num_bigint::BigInt) -> Value {
    match i.to_i64() {
        Some(v) => json!(v),
        None => json!(i.to_string()),
    }
}

pub fn rational_json(r: &BigRational) -> Value {
    json!({"num": integer(r.numer()), "den": integer(r.denom())})
}

/// Centers on the input tree, labelled as in the input document.
pub fn centers_json<S: Scalar>(inst: &Instance<S>, placement: &Placement<S>) -> Value {
    let t = inst.tree();
    let labels = &inst.network.labels;
    let centers: Vec<Value> = placement
        .points()
        .map(|p| {
            let (child, parent, offset) = t.to_input_edge(p);
            json!({
                "edge": [labels[child.0], labels[parent.0]],
                "offset_from_child": rational_json(&offset.to_rational()),
            })
        })
        .collect();
    Value::Array(centers)
}

pub fn solution_json<S: Scalar>(inst: &Instance<S>, solution: &Solution<S>) -> Value {
    let alpha = solution.alpha_star.to_rational();
    json!({
        "alpha": rational_json(&alpha),
        "alpha_float": ratio_to_f64(&alpha),
        "centers": centers_json(inst, &solution.placement),
        "stats": {
            "feasibility_calls": solution.feasibility_calls,
            "candidates": solution.candidates,
        },
    })
}

/// `{"feasible": true, "centers": [..]}` or `{"feasible": false}`.
pub fn feasibility_json<S: Scalar>(inst: &Instance<S>, result: &Feasibility<S>) -> Value {
    match result {
        Feasibility::Feasible(pl) => json!({"feasible": true, "centers": centers_json(inst, pl)}),
        Feasibility::Infeasible => json!({"feasible": false}),
    }
}

struct Spaced;

impl Formatter for Spaced {
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        w.write_all(b": ")
    }
}

/// One-line rendering with spaced separators.
pub fn render_json(value: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Spaced);
    serde::Serialize::serialize(value, &mut ser).expect("writing to memory");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasibility::SearchStrategy;
    use crate::numeric::Exact;
    use crate::optimizer::solve_candidate;
    use crate::tree::TreeNetwork;

    #[test]
    fn infeasible_document() {
        assert_eq!(render_json(&json!({"feasible": false})), r#"{"feasible": false}"#);
    }

    #[test]
    fn solution_document() {
        let inst =
            Instance::<Exact>::new(TreeNetwork::from_integers(&[1, 1, 1], &[(0, 1, 4), (1, 2, 4)]), SearchStrategy::Cascade)
                .unwrap();
        let s = solve_candidate(&inst, 1);
        let doc = render_json(&solution_json(&inst, &s));
        assert!(doc.starts_with(r#"{"alpha": {"num": 4, "den": 1}, "alpha_float": 4.0, "centers": [{"edge": [1, 0], "offset_from_child": {"num": 0, "den": 1}}]"#), "{doc}");
    }

    #[test]
    fn huge_parts_become_strings() {
        let big = BigRational::from_integer(num_traits::pow(num_bigint::BigInt::from(10), 30));
        assert_eq!(rational_json(&big)["num"], json!("1000000000000000000000000000000"));
    }
}
