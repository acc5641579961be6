from pathlib import Path
import os
from django.urls import reverse_lazy
from django.utils.translation import gettext_lazy as _

BASE_DIR = Path(__file__).resolve().parent.parent

# =========================================================
# 🔒 CONFIGURACIÓN DE SEGURIDAD
# =========================================================

# El motor no sirve páginas públicas; la clave sólo protege el admin de corridas.
SECRET_KEY = os.getenv('DJANGO_SECRET_KEY', 'django-insecure-punto-fijo-CHANGE_THIS_IN_PRODUCTION')

DEBUG = os.getenv('DJANGO_DEBUG', '') == '1'

ALLOWED_HOSTS = [
    "localhost",
    "127.0.0.1",
]


# ============================
#        INSTALLED APPS
# ============================
INSTALLED_APPS = [
    # --- DJANGO UNFOLD (Admin) ---
    "unfold",
    "unfold.contrib.filters",

    # Django core
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'django.contrib.staticfiles',

    # Apps del proyecto
    'semantica',
]


# ============================
#        MIDDLEWARE
# ============================
MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.contrib.sessions.middleware.SessionMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.csrf.CsrfViewMiddleware',
    'django.contrib.auth.middleware.AuthenticationMiddleware',
    'django.contrib.messages.middleware.MessageMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
]


ROOT_URLCONF = 'punto_fijo.urls'


# ============================
#        TEMPLATES
# ============================
TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [
                'django.template.context_processors.debug',
                'django.template.context_processors.request',
                'django.contrib.auth.context_processors.auth',
                'django.contrib.messages.context_processors.messages',
            ],
        },
    },
]


WSGI_APPLICATION = 'punto_fijo.wsgi.application'


# ============================
#        BASE DE DATOS
# ============================
# Sólo guarda la bitácora de corridas (--guardar).
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}


# ============================
#       REGIONAL
# ============================
LANGUAGE_CODE = 'es-ar'
TIME_ZONE = 'America/Argentina/Cordoba'
USE_I18N = True
USE_TZ = True


# ============================
#       ARCHIVOS ESTÁTICOS
# ============================
STATIC_URL = '/static/'
STATIC_ROOT = BASE_DIR / 'staticfiles'


DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# =========================================================
# ⚙️ MOTOR DE SEMÁNTICAS (valores por defecto de cada corrida)
# =========================================================
# Cualquier clave se puede pisar con la variable de entorno SEMANTICA_<CLAVE>
# o, para una invocación puntual, con los flags de los comandos.
SEMANTICA = {
    "TOLERANCIA": 1e-6,            # igualdad de correspondencias y Fix(η)/Fix(ε)
    "EPSILON_ITERACION": 1e-9,     # parada de Kleene en modo tolerancia
    "MAX_ITERACIONES": 100_000,
    "TOPE_DIVERGENCIA": 1e12,      # por encima de esto una coordenada pasa a ∞
    "LIMITE_EXPLOSION": 200_000,   # pares candidatos por suma en el paso MDP
    "PRESUPUESTO_ORACULO": 2_000_000,
    "HORIZONTE_MDP": 200,
    "LONGITUD_MAXIMA": 4,          # palabras del dominio UFA
    "MUESTRAS": 500,
    "SEMILLA": 0,
}


# =========================================================
# 📝 LOGGING
# =========================================================
# stdout queda reservado para el JSON de los comandos: todo el log va a stderr.
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "simple": {
            "format": "[{levelname}] {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "consola": {
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "formatter": "simple",
        },
    },
    "loggers": {
        "semantica": {
            "handlers": ["consola"],
            "level": os.getenv("SEMANTICA_LOG_LEVEL", "WARNING"),
            "propagate": False,
        },
    },
}


# =========================================================
# CONFIGURACIÓN DJANGO UNFOLD (ADMIN)
# =========================================================
UNFOLD = {
    "SITE_TITLE": "Punto Fijo",
    "SITE_HEADER": "Punto Fijo Admin",
    "SITE_URL": "/",

    "SIDEBAR": {
        "show_search": True,
        "show_all_applications": False,
        "navigation": [
            {
                "title": _("Semánticas"),
                "separator": True,
                "items": [
                    {
                        "title": _("Bitácora de Corridas"),
                        "icon": "receipt_long",
                        "link": reverse_lazy("admin:semantica_corrida_changelist"),
                    },
                ],
            },
            {
                "title": _("Configuración"),
                "separator": True,
                "items": [
                    {
                        "title": _("Usuarios y Accesos"),
                        "icon": "manage_accounts",
                        "link": reverse_lazy("admin:auth_user_changelist"),
                    },
                ],
            },
        ],
    },
}
