from setuptools import setup

setup(name='moment_utilities',
      version='1.0.0',
      description='Moment estimators, their asymptotic covariance and chi-square tests for the Gamma, Beta, Uniform and Fisher laws.',  # NOQA
      url='https://github.com/moment-utilities/moment-utilities',
      author='Moment Utilities Developers',
      license='BSD',
      packages=['moment_utilities'],
      tests_require=['pytest'],
      install_requires=['numpy>=1.17'],
      entry_points={
          'console_scripts': [
              'moment-utilities = moment_utilities.cli:main'
          ]
      },
      zip_safe=False)
