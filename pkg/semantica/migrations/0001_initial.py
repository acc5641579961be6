# Generated by Django 4.2.27 on 2026-10-18 10:04

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='Corrida',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('comando', models.CharField(choices=[('solve', 'Punto fijo'), ('check_grc', 'Condición de alcanzabilidad'), ('verify', 'Verificación de correspondencia'), ('oracle', 'Oráculo de fuerza bruta')], max_length=20)),
                ('instancia', models.CharField(blank=True, max_length=40)),
                ('modelo', models.CharField(max_length=500, verbose_name='Archivo del modelo')),
                ('codigo_salida', models.PositiveSmallIntegerField(default=0)),
                ('resultado', models.JSONField(blank=True, default=dict)),
                ('creado', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'verbose_name': 'Corrida',
                'verbose_name_plural': 'Corridas',
                'ordering': ['-creado', '-id'],
            },
        ),
    ]
