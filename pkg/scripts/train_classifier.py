"""Generate a balanced dataset, train the classifier, and report held-out metrics.

Compares the two feature maps; the linear one is expected to sit at chance.
"""
import argparse
import json

from nsit.classifier import FEATURE_MAPS, TrainConfig, evaluate, train
from nsit.datagen import GenerationConfig, generate_dataset


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--dim", type=int, default=2)
    ap.add_argument("--count", type=int, default=5000, help="training examples per class")
    ap.add_argument("--epochs", type=int, default=2000)
    ap.add_argument("--lr", type=float, default=10.0)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    train_set, _ = generate_dataset(GenerationConfig(args.dim, args.count, args.seed))
    test_set, _ = generate_dataset(GenerationConfig(args.dim, max(args.count // 5, 1), args.seed + 1000))
    for features in FEATURE_MAPS:
        model = train(train_set, TrainConfig(args.epochs, args.lr, args.seed, features=features))
        print(features, json.dumps(evaluate(model, test_set).to_dict()))


if __name__ == "__main__":
    main()
