#!/usr/bin/env python

import re
import ast

from setuptools import setup

# extract the version from the dsap folder
_version_re = re.compile(r'__version__\s+=\s+(.*)')
with open('dsap/__init__.py', 'rb') as f:
    version = str(ast.literal_eval(_version_re.search(
        f.read().decode('utf-8')).group(1)))

setup(
    name='dsap',
    version=version,
    description='Demographic profiling, bias and shift measures for '
                'datasets of face images',
    long_description=(open('README.rst').read() + '\n\n' +
                      open('CHANGELOG.md').read()),
    packages=['dsap', 'dsap.cli', 'dsap.cli.commands', 'dsap.test'],
    package_data={
        'dsap': ['templates/*.j2'],
        'dsap.cli': ['templates/*.j2'],
        'dsap.test': ['fixtures/*'],
    },
    license='MIT',
    python_requires='>=3.8',
    install_requires=[
        'appdirs~=1.4',
        'click>=7.0',
        'Jinja2>=2.10',
        'numpy>=1.17',
        'scipy>=1.3',
    ],
    extras_require={
        'test': ['pytest', 'hypothesis', 'flake8'],
    },
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Natural Language :: English',
        'Operating System :: MacOS :: MacOS X',
        'Operating System :: POSIX :: Linux',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Artificial Intelligence',
    ],
    entry_points={
        'console_scripts': [
            'dsap = dsap.cli.main:main',
        ]
    }
)
