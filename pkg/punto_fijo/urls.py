# ============================================
# ARCHIVO: punto_fijo/urls.py
# ============================================
from django.contrib import admin
from django.urls import path

# El motor se usa desde los comandos de gestión; la web sólo expone el admin
# para revisar la bitácora de corridas.
urlpatterns = [
    path("admin/", admin.site.urls),
]
