from rest_framework import serializers

from valcore.bundles import label
from valcore.values import format_value

# ───────────── CodeFamilySerializer ─────────────

class CodeFamilySerializer(serializers.Serializer):
    k = serializers.IntegerField()
    tag = serializers.CharField()
    label = serializers.CharField()
    size = serializers.SerializerMethodField()
    size_by_weight = serializers.SerializerMethodField()

    def get_size(self, obj):
        return len(obj)

    def get_size_by_weight(self, obj):
        return {str(size): n for size, n in sorted(obj.size_by_weight.items())}


# ───────────── SpeckleSpecSerializer ─────────────

class SpeckleSpecSerializer(serializers.Serializer):
    k = serializers.IntegerField()
    alpha = serializers.SerializerMethodField()
    beta = serializers.SerializerMethodField()
    gamma = serializers.SerializerMethodField()
    code = serializers.SerializerMethodField()
    parameters = serializers.SerializerMethodField()

    def get_alpha(self, obj):
        return [format_value(x) for x in obj.alpha]

    def get_beta(self, obj):
        return {str(size): format_value(x) for size, x in enumerate(obj.beta) if size >= 2}

    def get_gamma(self, obj):
        if self.context.get("omit_gamma"):
            return None
        return {label(m, obj.k): format_value(x) for m, x in sorted(obj.gamma.items())}

    def get_code(self, obj):
        return CodeFamilySerializer(obj.code).data

    def get_parameters(self, obj):
        return obj.parameter_count()
