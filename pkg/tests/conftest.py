import json

import pytest


SMALL_CONFIG = {
    "sim": {
        "seed": 7,
        "num_products": 240,
        "num_categories": 8,
        "num_queries": 60,
        "events_per_day": 1500,
        "horizon_days": 10.0,
        "cold_window_days": 2.0,
    },
    "substitutes": {"classifier_epochs": 80},
    "strategies": ["mean", "max", "attention"],
    "train": {"num_trees": 30, "max_depth": 4, "learning_rate": 0.1,
              "min_leaf_samples": 10, "seed": 7},
}


def write_config(path, out_dir, **overrides):
    record = json.loads(json.dumps(SMALL_CONFIG))
    record["out_dir"] = str(out_dir)
    for key, value in overrides.items():
        if isinstance(value, dict):
            record.setdefault(key, {}).update(value)
        else:
            record[key] = value
    path.write_text(json.dumps(record, indent=1))
    return path


@pytest.fixture()
def small_config_file(tmp_path):
    return write_config(tmp_path / "pipeline.json", tmp_path / "run")
