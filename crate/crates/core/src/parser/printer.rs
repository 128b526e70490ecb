use crate::model::{Network, UpdateValue};

/// Renders a network in the model syntax accepted by [`super::parse_model`].
pub fn print_model(net: &Network) -> String {
    let reg = &net.registry;
    let mut out = String::new();
    let groups = [
        (reg.clocks(), "clock"),
        (reg.parameters(), "parameter"),
        (reg.discretes(), "discrete"),
    ];
    if groups.iter().any(|(names, _)| !names.is_empty()) {
        out.push_str("var\n");
        for (names, kind) in groups {
            if !names.is_empty() {
                out.push_str(&format!("  {}: {kind};\n", names.join(", ")));
            }
        }
        out.push('\n');
    }
    for comp in &net.components {
        let labels: Vec<&str> = comp
            .alphabet
            .iter()
            .map(|&a| net.actions[a].as_str())
            .collect();
        out.push_str(&format!(
            "automaton {}\nsynclabs: {};\n",
            comp.name,
            labels.join(", ")
        ));
        for (id, loc) in comp.locations.iter().enumerate() {
            out.push_str(&format!(
                "\nloc {}: while {} do\n",
                loc.name,
                loc.invariant.display(reg)
            ));
            for t in comp.outgoing(id) {
                let mut guard: Vec<String> = Vec::new();
                if !t.guard.is_universe() || t.discrete_guard.is_empty() {
                    guard.push(t.guard.render(reg));
                }
                for g in &t.discrete_guard {
                    guard.push(format!(
                        "{} {} {}",
                        reg.discretes()[g.variable],
                        g.comparison.symbol(),
                        g.value
                    ));
                }
                out.push_str(&format!("  when {}", guard.join(" & ")));
                if let Some(a) = t.action {
                    out.push_str(&format!(" sync {}", net.actions[a]));
                }
                let mut updates: Vec<String> = t
                    .resets
                    .iter()
                    .map(|&c| format!("{}' = 0", reg.clocks()[c]))
                    .collect();
                for u in &t.discrete_updates {
                    let value = match &u.value {
                        UpdateValue::Constant(n) => n.to_string(),
                        UpdateValue::Variable(v) => reg.discretes()[*v].clone(),
                    };
                    updates.push(format!("{}' = {value}", reg.discretes()[u.variable]));
                }
                if !updates.is_empty() {
                    out.push_str(&format!(" do {{{}}}", updates.join(", ")));
                }
                out.push_str(&format!(" goto {};\n", comp.locations[t.target].name));
            }
        }
        out.push_str("\nend\n\n");
    }
    let mut init: Vec<String> = net
        .components
        .iter()
        .map(|c| format!("loc[{}] = {}", c.name, c.locations[c.initial_location].name))
        .collect();
    for poly in [&net.initial_clocks, &net.initial_constraint] {
        if !poly.is_universe() {
            init.push(poly.render(reg));
        }
    }
    for (name, value) in reg.discretes().iter().zip(&net.initial_discretes) {
        init.push(format!("{name} = {value}"));
    }
    out.push_str(&format!("init := {};\n", init.join(" & ")));
    out
}
