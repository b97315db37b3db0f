//! Runs every verification command on a small configuration and prints markdown.

use bclocal::cli::{cmd_all, parse_levels, OutputFormat, RunConfig, Session};

fn main() -> bclocal::Result<()> {
    let config = RunConfig { field: "Q3".into(), levels: parse_levels("1:1,2:1,2:2")?, ..RunConfig::default() };
    let bundle = cmd_all(&Session::new(config)?)?;
    print!("{}", bundle.render(OutputFormat::Markdown));
    println!("\noverall: {}", if bundle.pass { "PASS" } else { "FAIL" });
    Ok(())
}
