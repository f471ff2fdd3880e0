#![no_main]

use libfuzzer_sys::fuzz_target;
use qslsim::cli::{parse_config_text, Command, Flags, Panel};

const COMMANDS: [Command; 7] = [
    Command::Dynamics,
    Command::BoundScan,
    Command::QslSweep,
    Command::Reproduce(Panel::Fig1a),
    Command::Reproduce(Panel::Fig1b),
    Command::Reproduce(Panel::Fig2a),
    Command::Reproduce(Panel::Fig2b),
];

fuzz_target!(|data: &[u8]| {
    let Some((&selector, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let command = COMMANDS[selector as usize % COMMANDS.len()];
    // A resolved manifest must parse back to the same parameters.
    if let Ok(manifest) = parse_config_text(command, Some(text), &Flags::default()) {
        let again = parse_config_text(command, Some(&manifest.to_text()), &Flags::default())
            .expect("manifest text re-parses");
        assert_eq!(again.params, manifest.params);
    }
});
