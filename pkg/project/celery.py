# project/celery.py
import os

from celery import Celery

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'project.settings')

app = Celery('subval')
app.config_from_object('django.conf:settings', namespace='CELERY')

# generator.tasks holds the batch generation jobs
app.autodiscover_tasks(['generator'])
