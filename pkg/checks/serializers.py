from rest_framework import serializers

from valcore.bundles import label
from valcore.values import format_value

# ───────────── ViolationSerializer ─────────────

class ViolationSerializer(serializers.Serializer):
    family = serializers.CharField()
    level = serializers.IntegerField(allow_null=True)
    bundle = serializers.SerializerMethodField()
    goods = serializers.SerializerMethodField()
    values = serializers.SerializerMethodField()
    text = serializers.SerializerMethodField()

    def _k(self):
        return self.context.get("k")

    def get_bundle(self, obj):
        return label(obj.bundle, self._k())

    def get_goods(self, obj):
        return [g + 1 for g in obj.goods]

    def get_values(self, obj):
        return [format_value(x) for x in obj.values]

    def get_text(self, obj):
        return obj.describe(self._k())


# ───────────── CheckReportSerializer ─────────────

class CheckReportSerializer(serializers.Serializer):
    k = serializers.IntegerField()
    monotone = serializers.BooleanField()
    submodular = serializers.BooleanField()
    s3 = serializers.BooleanField()
    substitute = serializers.BooleanField()
    violation_count = serializers.IntegerField()
    sampled = serializers.IntegerField(allow_null=True)
    first_violation = serializers.SerializerMethodField()

    def get_first_violation(self, obj):
        if obj.first_violation is None:
            return None
        return ViolationSerializer(obj.first_violation, context={"k": obj.k}).data


class OracleVerdictSerializer(serializers.Serializer):
    passed = serializers.BooleanField()
    trials = serializers.IntegerField()
    p = serializers.SerializerMethodField()
    q = serializers.SerializerMethodField()
    bundle = serializers.SerializerMethodField()

    def get_p(self, obj):
        return [format_value(x) for x in obj.p] if obj.p is not None else None

    def get_q(self, obj):
        return [format_value(x) for x in obj.q] if obj.q is not None else None

    def get_bundle(self, obj):
        return label(obj.bundle) if obj.bundle is not None else None
