// Acceptance suite: filled in as modules land.
#[test]
fn placeholder() {}
