from rest_framework import serializers

from generator.sampling import GenConfig
from valcore.exceptions import UsageError
from valcore.valuation import dense_limit

MODEL_ALIASES = {"uniform": "uniform", "sumuniform": "sum_uniform", "sum_uniform": "sum_uniform"}


def parse_model(text: str) -> tuple[str, int]:
    """'uniform:5' -> ('uniform', 5)."""
    name, _, m = text.partition(":")
    model = MODEL_ALIASES.get(name.strip().lower())
    if model is None:
        raise serializers.ValidationError(f"unknown model '{name}', expected one of {sorted(MODEL_ALIASES)}")
    try:
        m = int(m) if m else 5
    except ValueError:
        raise serializers.ValidationError(f"model parameter '{m}' is not an integer")
    if m < 0:
        raise serializers.ValidationError("model parameter must be nonnegative")
    return model, m


# ───────────── GenConfigSerializer ─────────────

class GenConfigSerializer(serializers.Serializer):
    goods = serializers.IntegerField(min_value=2)
    model = serializers.CharField(default="uniform:5")
    seed = serializers.IntegerField(min_value=0, max_value=2**64 - 1, default=0)
    mu0 = serializers.ListField(child=serializers.IntegerField(min_value=0), required=False, default=list)

    def validate_goods(self, value):
        if value > dense_limit():
            raise serializers.ValidationError(f"at most {dense_limit()} goods")
        return value

    def validate_model(self, value):
        return parse_model(value)

    def validate(self, attrs):
        mu0 = attrs.get("mu0") or []
        if mu0 and len(mu0) != attrs["goods"]:
            raise serializers.ValidationError({"mu0": f"expected {attrs['goods']} entries"})
        return attrs

    def create(self, validated_data):
        model, m = validated_data["model"]
        try:
            return GenConfig(
                k=validated_data["goods"],
                model=model,
                m=m,
                seed=validated_data["seed"],
                mu0=tuple(validated_data.get("mu0") or ()),
            )
        except UsageError as exc:
            raise serializers.ValidationError(str(exc))


class GenStatsSerializer(serializers.Serializer):
    seed = serializers.IntegerField()
    goods = serializers.IntegerField()
    model = serializers.CharField()
    phase_sweeps = serializers.DictField(child=serializers.IntegerField())
    increments = serializers.IntegerField()
    seconds = serializers.FloatField()
