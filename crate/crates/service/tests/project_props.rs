mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use storyscope_service::project::Project;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn projects_round_trip_through_files(seed in any::<u64>()) {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let project = common::random_project(&mut rng, 0);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.json");
        project.save(&path).unwrap();
        let loaded = Project::load(&path).unwrap();
        prop_assert_eq!(&loaded, &project);
        // the file is stable: saving the loaded project gives the same bytes
        prop_assert_eq!(loaded.to_json(), std::fs::read_to_string(&path).unwrap());
    }

    #[test]
    fn every_truncation_is_rejected(seed in any::<u64>(), cut in 0.0f64..1.0) {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let json = common::random_project(&mut rng, 0).to_json();
        let trimmed = json.trim_end();
        let mut at = ((trimmed.len() as f64) * cut) as usize;
        while !trimmed.is_char_boundary(at) {
            at -= 1;
        }
        prop_assert!(Project::from_json(&trimmed[..at]).is_err());
    }
}
