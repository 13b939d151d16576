use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::Args;
use maniplab::matching::{
    find_matching_manipulation, is_stable, parse_instance, Agent, Procedure, Side, Stability,
};
use maniplab::{RuleKind, TieBreakPolicy};

use crate::read_input;

#[derive(Args, Debug)]
pub struct MatchArgs {
    /// Instance file: n, then n men's lists, then n women's lists.
    #[arg(long)]
    instance: PathBuf,
    /// Run deferred acceptance with this side proposing.
    #[arg(long)]
    gs: Option<Side>,
    /// Run the popular-people procedure.
    #[arg(long)]
    popular: bool,
    /// Rule that ranks people by popularity.
    #[arg(long, default_value = "stv", requires = "popular")]
    rule: RuleKind,
    /// Side whose most popular person chooses first.
    #[arg(long, default_value = "women", requires = "popular")]
    first: Side,
    #[arg(long, default_value = "lexmin", requires = "popular")]
    tie: TieBreakPolicy,
    /// Search every other list this agent (e.g. w1) could report.
    #[arg(long)]
    probe_agent: Option<Agent>,
}

pub fn run(args: MatchArgs) -> anyhow::Result<()> {
    let instance = parse_instance(&read_input(&args.instance)?)
        .with_context(|| format!("in {}", args.instance.display()))?;
    let mut procedures = Vec::new();
    if let Some(side) = args.gs {
        procedures.push(Procedure::GaleShapley(side));
    }
    if args.popular {
        procedures.push(Procedure::Popular {
            rule: args.rule,
            policy: args.tie.clone(),
            first: args.first,
        });
    }
    if procedures.is_empty() {
        procedures.push(Procedure::GaleShapley(Side::Men));
    }
    for procedure in &procedures {
        let matching = procedure.run(&instance)?;
        println!("{}: {matching}", label(procedure));
        match is_stable(&instance, &matching) {
            Stability::Stable => println!("stable: yes"),
            Stability::BlockingPair { man, woman } => {
                println!("stable: no (m{man} and w{woman} block)")
            }
        }
    }
    if let Some(agent) = args.probe_agent {
        if procedures.len() > 1 {
            bail!("--probe-agent needs a single procedure; pick --gs or --popular");
        }
        let procedure = &procedures[0];
        let partner = |index: usize| Agent {
            side: agent.side.other(),
            index,
        };
        match find_matching_manipulation(&instance, procedure, agent)? {
            Some(lie) => {
                let list: Vec<String> = lie.list.iter().map(|&x| partner(x).to_string()).collect();
                println!(
                    "misreport: {agent} reports {} and gets {} instead of {}",
                    list.join(">"),
                    partner(lie.partner),
                    partner(lie.truthful_partner)
                );
            }
            None => println!("misreport: none for {agent}"),
        }
    }
    Ok(())
}

fn label(procedure: &Procedure) -> String {
    match procedure {
        Procedure::GaleShapley(Side::Men) => "men-proposing".into(),
        Procedure::GaleShapley(Side::Women) => "women-proposing".into(),
        Procedure::Popular { rule, first, .. } => {
            let first = if *first == Side::Women {
                "women"
            } else {
                "men"
            };
            format!("popular ({rule}, {first} first)")
        }
    }
}
