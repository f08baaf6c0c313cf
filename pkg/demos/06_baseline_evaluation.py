"""Score the native baseline predictors on freshly generated datasets.

The last-recorded-state mean is a strong baseline whenever dynamics settle
quickly; the initial-state mean is exact on weight-balanced graphs (state
sum conserved) and biased elsewhere. Learned models have to beat these.
"""

from pathlap import CaseType, GraphModel, Strategy, evaluate_dataset, generate_dataset

print(f"{'dataset':28s} {'strategy':16s} {'rmse':>10s} {'mape%':>10s} {'ms/sample':>10s}")
for model in (GraphModel.BA, GraphModel.ER):
    for case in CaseType.ALL:
        _, test = generate_dataset(model, 25, case, train_count=1, test_count=40, master_seed=5)
        for strategy in Strategy.ALL:
            r = evaluate_dataset(test, strategy)
            print(f"{r.dataset_id:28s} {strategy:16s} {r.rmse:>10.5f} {r.mape:>10.4f} "
                  f"{r.prediction_time_ms:>10.4f}")

# on a weight-balanced fixture the initial mean is the exact target
_, balanced = generate_dataset(
    GraphModel.BA, 25, CaseType.BASE, train_count=1, test_count=40, master_seed=5, p_b=1.0
)
r = evaluate_dataset(balanced, Strategy.INITIAL_MEAN)
print(f"\np_b=1 fixture, initial_mean: rmse={r.rmse:.2e} mape={r.mape:.2e}% (conservation)")
