app_name = "ofdma_groupsched"
app_title = "OFDMA Grouped-Subcarrier Scheduler"
app_publisher = "ofdma_groupsched developers"
app_description = "Variance-based grouped-subcarrier and power allocation for downlink OFDMA"
app_license = "mit"

# Allocators
# ------------------
# Each entry maps the algorithm selector used in configs and on the command
# line to a callable with signature
# (reports, weights, l_param, max_it, prior_rates=None) -> Allocation, where
# prior_rates is the per-user rate delivered in earlier slots of the run.

allocator_hooks = {
    "variance": "ofdma_groupsched.allocator.run_variance",
    "best_gain": "ofdma_groupsched.baselines.run_best_gain",
    "decentralized": "ofdma_groupsched.baselines.run_decentralized",
    "superiority": "ofdma_groupsched.baselines.run_superiority",
}

# Channel models
# ------------------
# Signature (config, mean_snr, slot) -> SnrMatrix

channel_hooks = {
    "iid_exp": "ofdma_groupsched.sim.draw_iid_exp",
    "multipath": "ofdma_groupsched.sim.draw_multipath",
}


def get_attr(method_path: str):
    """Resolve a dotted hook path to the object it names"""
    import importlib

    module_name, attr = method_path.rsplit(".", 1)
    return getattr(importlib.import_module(module_name), attr)


def get_hook(registry: dict, key: str):
    """Look up and resolve a hook by key"""
    from ofdma_groupsched.exceptions import ConfigError

    if key not in registry:
        raise ConfigError(f"Unknown selector '{key}', expected one of: {', '.join(registry)}")
    return get_attr(registry[key])
