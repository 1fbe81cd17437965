mod common;

#[test]
fn single_agent_matches_closed_form_for_100_steps() {
    let config = common::single_agent_config();
    let expected = common::closed_form_energies(&config, 0.2, 100);
    let simulated = common::simulated_energies(&config, 0.2, 100);
    assert_eq!(simulated, expected);
}

#[test]
fn closed_form_reproduction_schedule() {
    let config = common::single_agent_config();
    let traj = common::closed_form_energies(&config, 0.2, 100);
    let births: Vec<usize> = (0..100)
        .filter(|&i| traj[i].len() > if i == 0 { 1 } else { traj[i - 1].len() })
        .map(|i| i + 1)
        .collect();
    // 10 + 0.1 crosses the threshold at once, then each half needs 50 more rounds.
    assert_eq!(births, vec![1, 51]);
    assert_eq!(traj[99].len(), 4);
    assert!((traj[0][0] - 5.05).abs() < 1e-12);
}

#[test]
fn starving_agent_dies_on_schedule() {
    // Bite 0.05 nets -0.05 a round: 10 / 0.05 = 200 rounds to reach zero,
    // death on the first round energy goes negative.
    let config = affectsim::config::SimConfig {
        n_steps: 250,
        snapshot_step: 250,
        ..common::single_agent_config()
    };
    let traj = common::simulated_energies(&config, 0.05, 250);
    let death = traj.iter().position(|e| e.is_empty()).unwrap() + 1;
    let expected = common::closed_form_energies(&config, 0.05, 250)
        .iter()
        .position(|e| e.iter().all(|&x| x < 0.0))
        .unwrap()
        + 1;
    assert_eq!(death, expected);
    assert!((200..=202).contains(&death));
}
