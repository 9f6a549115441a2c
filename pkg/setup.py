"""
Set up script for the E2 homology workbench.

Installs the e2homlab command; the application still runs as ``python app.py``.
"""

from setuptools import find_packages, setup

with open('requirements.txt', encoding='utf-8') as f:
    requirements = [line.strip() for line in f
                    if line.strip() and not line.startswith('#') and not line.startswith('pytest')]

setup(
    name='e2homlab',
    version='0.3.0',
    description='Low-dimensional homology of E_2(A) over finite commutative rings',
    packages=find_packages(exclude=['tests', 'tests.*']),
    py_modules=['app'],
    install_requires=requirements,
    extras_require={'test': ['pytest==7.4.3']},
    python_requires='>=3.8',
    entry_points={'console_scripts': ['e2homlab = app:main']},
)
