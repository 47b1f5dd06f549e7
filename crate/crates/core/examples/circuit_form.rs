//! Closes a path into a circuit with the artificial sink-to-source arc and
//! self-loops on skipped vertices, then decodes it back.

use spedac::evaluate;
use spedac::export::{to_circuit_form, CircuitArc};
use spedac::fixtures::{seven_vertex, SevenVertex};

fn main() {
    let inst = seven_vertex(10);
    let path = evaluate(&inst, &SevenVertex::path(&["s", "a", "c", "d", "t"])).unwrap();
    let circuit = to_circuit_form(&inst);
    let closed = circuit.close_path(&path);
    for arc in &closed {
        match *arc {
            CircuitArc::Real(a) => {
                let a = inst.arc(a);
                println!("arc {} -> {}", SevenVertex::label(a.tail), SevenVertex::label(a.head));
            }
            CircuitArc::Closing => println!("closing arc t -> s"),
            CircuitArc::SelfLoop(v) => println!("self-loop on {}", SevenVertex::label(v)),
        }
    }
    println!("single circuit: {}", circuit.check(&closed).is_ok());
    println!("decodes to the original arcs: {}", circuit.decode(&closed).unwrap() == path.arc_flags(&inst));

    let mut broken = closed.clone();
    broken.retain(|a| !matches!(a, CircuitArc::SelfLoop(_)));
    println!("without self-loops: {}", circuit.check(&broken).unwrap_err());
}
