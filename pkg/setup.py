#!/usr/bin/env python
# -*- coding: utf-8 -*-

from setuptools import setup
from setuptools import find_packages

setup(
    name='gibbslab',
    version='1.0',
    description='Numerical experiments on thermal states of quantum spin lattices',
    author='The gibbslab Authors',
    packages=find_packages(),
    python_requires='>=3.8',
    install_requires=[
        'numpy',
        'scipy',
        'networkx',
        'opt_einsum',
        'pandas>=1.5',
        'pyyaml',
        'marshmallow>=3.13,<4',
        'stevedore',
    ],
    entry_points={
        'console_scripts': [
            'gibbslab = gibbslab.labcli.main:main',
        ],
        'gibbslab.experiments': [],
    },
)
