use super::formula::Formula;

// Binding strength; higher binds tighter.
const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMP,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

/// Renders with the fewest parentheses that still re-parse to the same tree.
pub fn render_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_at(f, IFF, &mut out);
    out
}

fn write_at(f: &Formula, min: u8, out: &mut String) {
    if level(f) < min {
        out.push('(');
        write_formula(f, out);
        out.push(')');
    } else {
        write_formula(f, out);
    }
}

fn write_binary(a: &Formula, op: &str, b: &Formula, left: u8, right: u8, out: &mut String) {
    write_at(a, left, out);
    out.push(' ');
    out.push_str(op);
    out.push(' ');
    write_at(b, right, out);
}

fn write_formula(f: &Formula, out: &mut String) {
    match f {
        Formula::Atom(p) => out.push_str(p),
        Formula::Bottom => out.push_str("false"),
        Formula::Top => out.push_str("true"),
        Formula::Not(a) => {
            out.push('~');
            write_at(a, UNARY, out);
        }
        // `<->` and the Boolean chains are left-associative, `->` is right-associative.
        Formula::Iff(a, b) => write_binary(a, "<->", b, IFF, IMP, out),
        Formula::Implies(a, b) => write_binary(a, "->", b, OR, IMP, out),
        Formula::Or(a, b) => write_binary(a, "|", b, OR, AND, out),
        Formula::And(a, b) => write_binary(a, "&", b, AND, UNARY, out),
        Formula::Box(m, a) => {
            out.push('[');
            out.push_str(m.as_str());
            out.push(']');
            write_at(a, UNARY, out);
        }
        Formula::Dia(m, a) => {
            out.push('<');
            out.push_str(m.as_str());
            out.push('>');
            write_at(a, UNARY, out);
        }
        Formula::DefBox(m, a) => {
            out.push_str("[[");
            out.push_str(m.as_str());
            out.push_str("]]");
            write_at(a, UNARY, out);
        }
        Formula::DefDia(m, a) => {
            out.push_str("<<");
            out.push_str(m.as_str());
            out.push_str(">>");
            write_at(a, UNARY, out);
        }
    }
}
