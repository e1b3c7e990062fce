//! Seeded certification of every property of one built-in, as the `verify`
//! subcommand does it, printed as a table.

use hcl::operator::Builtin;
use hcl::verify::certify_all;

fn main() -> hcl::Result<()> {
    let op = Builtin::ma_k(4, 2)?;
    println!("{op}");
    for c in certify_all(&op, 2000, 20_240_917)? {
        println!(
            "  {:<14} worst margin {:>11.3e}  tolerance {:>7.0e}  {}",
            c.property.as_str(),
            c.worst_margin,
            c.tolerance,
            if c.passed { "ok" } else { "VIOLATED" }
        );
    }
    Ok(())
}
