from django.apps import AppConfig


class ReductionConfig(AppConfig):
    name = 'reduction'
    verbose_name = 'Dimension reduction correction term'
