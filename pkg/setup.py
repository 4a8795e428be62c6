from setuptools import setup, find_packages
import sys

if sys.version_info.major != 3:
    print('This Python is only compatible with Python 3, but you are running '
          'Python {}. The installation will likely fail.'.format(sys.version_info.major))


extras = {
    'test': [
        'pytest',
    ],
}

all_deps = []
for group_name in extras:
    all_deps += extras[group_name]

extras['all'] = all_deps

setup(name='fluxlab',
      packages=[package for package in find_packages()
                if package.startswith('fluxlab')],
      install_requires=[
          'numpy',
          'scipy',
          'tqdm',
          'joblib',
          'click',
          'pandas',
          'matplotlib',
      ],
      extras_require=extras,
      entry_points={
          'console_scripts': [
              'fluxlab=fluxlab.run:main',
          ],
      },
      description='Information flux and entropy production in open quantum systems',
      version='0.1.0')
